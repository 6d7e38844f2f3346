from sectflow.shapes.shape import (Direction, DirectionGrid, Frame, GridShape,
                                   LevelGrid, centered_frame,
                                   directions_from_angles,
                                   half_circle_directions, shape_from_mask,
                                   uniform_directions, uniform_levels,
                                   validate_in_ball)

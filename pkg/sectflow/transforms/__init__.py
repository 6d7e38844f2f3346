from sectflow.transforms.complex import (CubicalComplex, build_complex,
                                         euler_characteristic, oracle_euler)
from sectflow.transforms.transform import (ECTMatrix, SECTMatrix, StepFunction,
                                           TransformMatrix, both_transforms,
                                           ec_curve, ect, ect_from_curves,
                                           euler_curves, sample_ec, sect,
                                           sect_curve, sect_from_curves,
                                           transform_shapes)

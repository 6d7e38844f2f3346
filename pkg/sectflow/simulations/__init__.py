from sectflow.simulations.arcs import (Arm, ArcSpec, EpsilonConfig,
                                       arc_distance, rasterize,
                                       sample_arcspec, sample_shape,
                                       simulation_frame)
from sectflow.simulations.experiment import (ExperimentConfig, RejectionTable,
                                             example_sect_curves,
                                             run_experiment, run_experiments)
from sectflow.simulations.nodules import (run_nodule_study, sample_cohort,
                                          sample_nodule)

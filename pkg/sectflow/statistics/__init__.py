from sectflow.statistics.metrics import (DistanceMatrix, GroupLabels,
                                         loss_from_labels, pairwise_distances,
                                         rho_hat, theta_hat,
                                         transform_distance)
from sectflow.statistics.nhst import (SplitResult, TestConfig, TestResult,
                                      exact_p_value, nhst_ect, nhst_sect,
                                      permutation_test, rejection_rate,
                                      split_half_test, threshold_index)

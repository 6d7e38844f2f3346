from string import Template

CONFIG_KEYS = [
    'type', 'family', 'epsilons', 'n_per_group', 'replicates', 'directions', 'levels', 'radius', 'resolution',
    'alpha', 'permutations', 'seed', 'noise_sd', 'noise_mean', 'method', 'repeats', 'out', 'dump_masks', 'threads'
]

REJECTION_RATES_FILE = Template("rejection_rates_$method.csv")

P_VALUES_FILE = Template("p_values_$method.csv")

SECT_CURVES_FILE = "sect_curves.csv"

MASK_FILE = Template("masks/epsilon_${epsilon_index}_group_${group}_shape_${index}.pgm")

NODULE_RESULT_FILE = "nodule_test.json"

NODULE_SPLIT_FILE = "split_p_values.csv"

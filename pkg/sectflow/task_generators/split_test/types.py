from string import Template

CONFIG_KEYS = ['type', 'group', 'repeats', 'mode', 'alpha', 'permutations', 'seed', 'radius', 'out', 'threads']

SPLIT_P_VALUES_FILE = "split_p_values.csv"

RESULT_MESSAGE = Template("Split-half p-values over $repeats splits of $size shapes: mean $mean, sd $sd.")

from string import Template

CONFIG_KEYS = ['type', 'group1', 'group2', 'mode', 'alpha', 'permutations', 'seed', 'radius', 'out', 'threads']

RESULT_MESSAGE = Template(
    "$decision H0 at alpha = $alpha: observed loss $observed_loss, p-value $p_value ($n1 vs $n2 shapes).")

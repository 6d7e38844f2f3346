from string import Template

CONFIG_KEYS = ['type', 'inputs', 'directions', 'angles', 'levels', 'radius', 'pitch', 'threshold', 'mode', 'out', 'threads']

MATRIX_FILE = Template("$stem.csv")

MODE_MATRIX_FILE = Template("$mode/$stem.csv")

import os

if os.environ.get('SECTFLOW_THREADS', '1').isdigit() and int(os.environ.get('SECTFLOW_THREADS', '1')) >= 1:
    SECTFLOW_THREADS = int(os.environ.get('SECTFLOW_THREADS', '1'))
else:
    raise ValueError("SECTFLOW_THREADS must be a positive integer.")

SECTFLOW_LOG_LEVEL = os.environ.get('SECTFLOW_LOG_LEVEL', 'INFO').upper()

if int(os.environ.get('SECTFLOW_SLOW_TESTS', 0)) in [0, 1]:
    SECTFLOW_SLOW_TESTS = False if int(os.environ.get('SECTFLOW_SLOW_TESTS', 0)) == 0 else True
else:
    raise ValueError("SECTFLOW_SLOW_TESTS must be 0 or 1.")

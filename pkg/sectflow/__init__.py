from sectflow.constants.types import TOOL_VERSION

__version__ = TOOL_VERSION

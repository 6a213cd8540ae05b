from cli.commands import cli
from cli.config import TOOL_VERSION, RunConfig

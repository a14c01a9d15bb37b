from .config import COMMANDS, RunConfig, load_config
from .commands import COMMAND_TABLE
from .main import main

__all__ = ["COMMANDS", "RunConfig", "load_config", "COMMAND_TABLE", "main"]

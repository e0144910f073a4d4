"""Command-line commands."""

from .commands import RunConfig, cmd_list, cmd_verify, load_run_config

__all__ = ['RunConfig', 'cmd_list', 'cmd_verify', 'load_run_config']

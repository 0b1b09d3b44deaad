from cli.commands import analyze, extract, hide, owner, recover

COMMANDS = [owner, hide, extract, recover, analyze]

__all__ = ["COMMANDS"]

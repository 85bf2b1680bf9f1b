"""
Experiments behind the pysil subcommands. Every experiment exposes run(config, tracker, outcome).
"""

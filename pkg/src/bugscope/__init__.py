"""bugscope: mine and characterize hardware bug-fix history from Git hosting."""

__version__ = "0.1.0"

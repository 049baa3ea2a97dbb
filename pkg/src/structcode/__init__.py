"""Workbench for codings between graphs and relational structures."""

__version__ = "0.1.0"

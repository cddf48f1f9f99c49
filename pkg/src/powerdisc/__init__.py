"""Desk-scale certificates that power sets of cosimplicial finite sets realize to discrete spaces."""

__version__ = "0.1.0"

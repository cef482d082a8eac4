"""Daily charging demand of a partially electrified small-vessel fleet, from port-call records."""

__version__ = "0.1.0"

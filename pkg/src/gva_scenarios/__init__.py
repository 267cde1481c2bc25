"""Sectoral GVA nowcasting and capacity-utilisation scenario projection."""

__version__ = "0.1.0"

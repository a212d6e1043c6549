"""modloc-lab: desk-scale numerical checks of localization-induced
thermality in quantum field theory."""

__version__ = "0.1.0"

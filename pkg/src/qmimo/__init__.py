"""Link-level simulator for MIMO downlinks with low-resolution
adaptive-threshold receivers."""

__version__ = "0.1.0"

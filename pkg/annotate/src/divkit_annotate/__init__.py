"""divkit-annotate: sidecar exporter for divkit caption datasets."""

__version__ = "0.1.0"

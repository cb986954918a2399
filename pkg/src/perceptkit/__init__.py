"""perceptkit: a modular robotics-perception SDK kernel."""

__version__ = "0.1.0"

"""HTTP service exposing the toolkit to long-running, multi-client use."""

from .app import create_app

__all__ = ["create_app"]

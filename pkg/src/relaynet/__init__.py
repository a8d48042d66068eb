"""Relay placement and minimum-area range assignment around
no-transmission zones: visibility graphs over disk obstacles, exact small
Steiner trees, homotopy fingerprinting, and the evolution/pre-scan
pipeline, with a CLI front end."""

__version__ = "0.1.0"

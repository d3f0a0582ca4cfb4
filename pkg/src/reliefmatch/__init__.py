"""Disaster-relief coordination engine.

Classifies short social-media posts as resource needs or availabilities,
extracts actionable fields (resource, quantity, location, source,
contact), matches needs to availabilities by resource overlap, and
serves the workflow over a REST API.
"""

__version__ = "0.1.0"

"""Pickup-and-delivery route planning.

Instances, plans and reports cross the boundary as JSON documents; these
wrappers accept and return plain dicts.
"""

import json

from . import _core
from ._core import InputError

__all__ = ["InputError", "fixture_names", "generate_fixture", "solve", "validate", "render_svg", "route_model"]


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def fixture_names():
    return list(_core.fixture_names())


def generate_fixture(name, variant="canonical"):
    return json.loads(_core.generate_fixture(name, variant))


def solve(instance, **options):
    """Plan routes; returns the plan document including its report."""
    return json.loads(_core.solve(_text(instance), **options))


def validate(instance, plan):
    return json.loads(_core.validate(_text(instance), _text(plan)))


def render_svg(instance, plan=None):
    return _core.render_svg(_text(instance), None if plan is None else _text(plan))


def route_model(instance, vehicle, mobility_mode="filter"):
    return json.loads(_core.route_model(_text(instance), vehicle, mobility_mode))

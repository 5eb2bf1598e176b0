"""Bundled instances shared by several test modules."""

from importlib import resources

from holantlab import formats as F


def _load(name):
    return F.decode_instance(F.loads(resources.files("holantlab.data").joinpath(name).read_text()))


BUNDLED_INSTANCES = {name: _load(f"{name}.gt") for name in
                     ("fixture_odd", "fixture_even", "fixture_n2k2_c1", "fixture_n2k2_c2")}

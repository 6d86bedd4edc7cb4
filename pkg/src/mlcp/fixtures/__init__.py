"""Bundled example nets, used by the test suite and handy for demos."""

from importlib import resources

from ..model import parse_cpnet

FIXTURES = ("fig1", "fig2", "fig3", "fig4", "fig6a", "fig6b")


def fixture_text(name):
    if name not in FIXTURES:
        raise KeyError("no fixture named %r" % name)
    return resources.files(__package__).joinpath(name + ".mlcp").read_text()


def load_fixture(name):
    return parse_cpnet(fixture_text(name))

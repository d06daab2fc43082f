"""Small named spaces and maps with known quotient behaviour.

``weak_not_spectral``
    X = {b ~> a, c ~> a} (generic points b, c; closed point a) onto the chain
    r ~> q ~> p via b -> r, c -> q, a -> p.  A weak spectral quotient that is not
    a spectral quotient.  The source diagram is unlabeled; this assignment is the
    only one (up to swapping b and c) with the three recorded properties, and the
    tests re-derive all three.
``weak_not_spectral_corestriction``
    Its corestriction over the open {r, q}: not even a weak spectral quotient.
``three_point_scheme``
    The smallest nonaffine scheme: generic point p with two closed points q1, q2.
``three_point_affinization``
    Its affinization onto Spec of a DVR, generic "(0)" ~> closed "(t)".  The fiber
    over the closed point is {q1, q2}, which is disconnected.
"""
from .spaces import FiniteSpectralSpace, SpectralMap


def chain(*points) -> FiniteSpectralSpace:
    return FiniteSpectralSpace(points, zip(points, points[1:]))


def weak_not_spectral() -> SpectralMap:
    X = FiniteSpectralSpace(["a", "b", "c"], [("b", "a"), ("c", "a")])
    Y = chain("r", "q", "p")
    return SpectralMap(X, Y, {"b": "r", "c": "q", "a": "p"})


def three_point_scheme() -> FiniteSpectralSpace:
    return FiniteSpectralSpace(["p", "q1", "q2"], [("p", "q1"), ("p", "q2")])


def three_point_affinization() -> SpectralMap:
    return SpectralMap(three_point_scheme(), chain("(0)", "(t)"),
                       {"p": "(0)", "q1": "(t)", "q2": "(t)"})


def fixtures() -> dict:
    m = weak_not_spectral()
    return {
        "weak_not_spectral": m,
        "weak_not_spectral_corestriction": m.corestrict({"r", "q"}),
        "three_point_scheme": three_point_scheme(),
        "three_point_affinization": three_point_affinization(),
    }

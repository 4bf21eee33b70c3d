import random
from fractions import Fraction

import pytest

from realcycle.abgrp import check_exact, free_rank, invariant_factors
from realcycle.errors import MarkerOffComponent, NotSquareFree
from realcycle.numeric import UPoly
from realcycle.realcurve import (
    Hyperelliptic,
    ProjectiveLine,
    PuncturedLine,
    TwistDivisor,
    TwistMarker,
    bockstein_ladder,
    component_containing,
    real_components,
    sample_point,
    twist_class,
    twisted_cohomology,
)

X = UPoly.x()


def hyper(f, projective=False):
    return Hyperelliptic(f, projective)


def circle_count(components):
    return sum(1 for c in components if c.is_circle)


def untwisted(components):
    return {c.id: 0 for c in components}


class TestPuncturedLine:
    def test_single_puncture(self):
        comps = real_components(PuncturedLine.make([0]))
        assert len(comps) == 2
        assert all(c.kind == "interval" and not c.compact for c in comps)

    def test_no_punctures(self):
        comps = real_components(PuncturedLine.make())
        assert len(comps) == 1

    def test_duplicate_punctures_rejected(self):
        with pytest.raises(Exception):
            PuncturedLine.make([1, 1])


class TestProjectiveLine:
    def test_one_circle(self):
        comps = real_components(ProjectiveLine())
        assert len(comps) == 1
        assert comps[0].is_circle and comps[0].compact


class TestHyperelliptic:
    def test_unit_circle(self):
        comps = real_components(hyper(UPoly.of(1, 0, -1)))     # 1 - x^2
        assert len(comps) == 1
        assert comps[0].is_circle and comps[0].compact

    def test_two_ovals(self):
        f = (UPoly.of(-1, 0, 1) * UPoly.of(-4, 0, 1)).scale(-1)   # -(x^2-1)(x^2-4)
        comps = real_components(hyper(f))
        assert circle_count(comps) == 2 and len(comps) == 2

    def test_elliptic_projective(self):
        comps = real_components(hyper(UPoly.of(0, -1, 0, 1), projective=True))   # x^3 - x
        assert len(comps) == 2
        assert all(c.is_circle and c.compact for c in comps)
        assert any(c.through_infinity for c in comps)

    def test_elliptic_affine(self):
        comps = real_components(hyper(UPoly.of(0, -1, 0, 1)))
        kinds = sorted(c.kind for c in comps)
        assert kinds == ["circle", "interval"]

    def test_empty_locus(self):
        assert real_components(hyper(UPoly.of(-1, 0, -1))) == ()   # y^2 = -(x^2+1)

    def test_positive_definite_affine_gives_two_lines(self):
        comps = real_components(hyper(UPoly.of(1, 0, 1)))          # y^2 = x^2+1
        assert len(comps) == 2
        assert {c.branch for c in comps} == {"plus", "minus"}

    def test_positive_definite_projective_closes(self):
        # deg 2, half-degree odd: the two sheets close into one circle
        comps = real_components(hyper(UPoly.of(1, 0, 1), projective=True))
        assert len(comps) == 1 and comps[0].is_circle
        # deg 4, half-degree even: two disjoint circles
        comps4 = real_components(hyper(UPoly.of(1, 0, 0, 0, 1), projective=True))
        assert len(comps4) == 2 and all(c.is_circle for c in comps4)

    def test_even_degree_with_roots_wraps_once(self):
        f = UPoly.of(-4, 0, 5, 0, -1).scale(-1)    # (x^2-1)(x^2-4)
        affine = real_components(hyper(f))
        assert circle_count(affine) == 1 and len(affine) == 3
        closed = real_components(hyper(f, projective=True))
        assert len(closed) == 2 and all(c.is_circle for c in closed)
        wrap = [c for c in closed if c.through_infinity]
        assert len(wrap) == 1 and len(wrap[0].arcs) == 2

    def test_projective_negative_leading_even_degree_adds_nothing(self):
        f = (UPoly.of(-1, 0, 1) * UPoly.of(-4, 0, 1)).scale(-1)
        assert real_components(hyper(f, projective=True)) == real_components(hyper(f))

    def test_double_root_rejected(self):
        with pytest.raises(NotSquareFree):
            hyper(UPoly.of(0, 0, 1))

    def test_component_count_matches_construction(self):
        rng = random.Random(2024)
        for _ in range(100):
            n = rng.randint(1, 6)
            roots = set()
            while len(roots) < n:
                roots.add(Fraction(rng.randint(-10, 10), rng.randint(1, 4)))
            roots = sorted(roots)
            lead = rng.choice([-2, -1, 1, 3])
            f = UPoly.from_roots(roots, lead)
            comps = real_components(hyper(f))
            # count maximal f >= 0 intervals by dense sampling between the
            # known roots (independent of the Sturm machinery)
            probes = [roots[0] - 1]
            for a, b in zip(roots, roots[1:]):
                probes.append((a + b) / 2)
            probes.append(roots[-1] + 1)
            positives = [f.eval_at(x) > 0 for x in probes]
            bounded = sum(1 for i in range(1, n) if positives[i])
            unbounded = int(positives[0]) + int(positives[-1])
            assert circle_count(comps) == bounded
            assert len(comps) - circle_count(comps) == unbounded

    def test_euler_characteristic_shadow(self):
        rng = random.Random(31415)
        for _ in range(40):
            n = rng.randint(2, 5)
            roots = sorted(rng.sample(range(-8, 9), n))
            f = UPoly.from_roots(roots, rng.choice([-1, 1]))
            comps = real_components(hyper(f))
            probes = [(a + b) / Fraction(2) for a, b in zip(roots, roots[1:])]
            bounded_positive = sum(1 for x in probes if f.eval_at(x) > 0)
            assert circle_count(comps) == bounded_positive


class TestLocation:
    def test_point_on_oval(self):
        curve = hyper(UPoly.of(1, 0, -1))
        comps = real_components(curve)
        assert component_containing(curve, comps, Fraction(1, 2)).id == comps[0].id
        assert component_containing(curve, comps, 1).id == comps[0].id   # root endpoint
        assert component_containing(curve, comps, 2) is None

    def test_branch_split(self):
        curve = hyper(UPoly.of(1, 0, 1))
        comps = real_components(curve)
        plus = component_containing(curve, comps, 0, y_sign=1)
        minus = component_containing(curve, comps, 0, y_sign=-1)
        assert plus.branch == "plus" and minus.branch == "minus"

    def test_puncture_is_off_curve(self):
        curve = PuncturedLine.make([0])
        comps = real_components(curve)
        assert component_containing(curve, comps, 0) is None
        assert component_containing(curve, comps, -3).id == "c0"

    def test_sample_points_lie_inside(self):
        cases = [
            hyper(UPoly.of(1, 0, -1)),
            hyper((UPoly.of(-1, 0, 1) * UPoly.of(-4, 0, 1)).scale(-1)),
            hyper(UPoly.of(0, -1, 0, 1), projective=True),
            PuncturedLine.make([0, 1]),
            ProjectiveLine(),
        ]
        for curve in cases:
            comps = real_components(curve)
            for comp in comps:
                pt = sample_point(comp, curve)
                located = component_containing(curve, comps, pt.x,
                                               pt.branch if pt.branch else None)
                assert located is not None and located.id == comp.id

    def test_interval_sample(self):
        curve = PuncturedLine.make([0])
        comps = real_components(curve)
        right = sample_point(comps[1], curve)
        assert right.x > 0


class TestTwist:
    def unit_circle(self):
        curve = hyper(UPoly.of(1, 0, -1))
        comps = real_components(curve)
        return curve, comps

    def test_single_marker_twists(self):
        curve, comps = self.unit_circle()
        div = TwistDivisor((TwistMarker(comps[0].id, Fraction(0), 1, 1),))
        assert twist_class(curve, comps, div) == {comps[0].id: 1}

    def test_two_markers_cancel(self):
        curve, comps = self.unit_circle()
        div = TwistDivisor((
            TwistMarker(comps[0].id, Fraction(0), 1, 1),
            TwistMarker(comps[0].id, Fraction(1, 2), 1, 1),
        ))
        assert twist_class(curve, comps, div) == {comps[0].id: 0}

    def test_empty_divisor(self):
        curve, comps = self.unit_circle()
        assert twist_class(curve, comps, TwistDivisor.empty()) == {comps[0].id: 0}

    def test_marker_off_component(self):
        curve, comps = self.unit_circle()
        with pytest.raises(MarkerOffComponent):
            twist_class(curve, comps, TwistDivisor((TwistMarker(comps[0].id, Fraction(5), 1, 1),)))

    def test_interval_markers_stay_trivial(self):
        curve = PuncturedLine.make([0])
        comps = real_components(curve)
        div = TwistDivisor((TwistMarker("c1", Fraction(2), 1, 1),))
        assert twist_class(curve, comps, div) == {"c0": 0, "c1": 0}


class TestTwistedCohomology:
    def test_untwisted_circle(self):
        comps = real_components(hyper(UPoly.of(1, 0, -1)))
        coh = twisted_cohomology(comps, untwisted(comps))
        assert free_rank(coh.h0) == 1 and invariant_factors(coh.h0) == ()
        assert free_rank(coh.h1) == 1 and invariant_factors(coh.h1) == ()

    def test_twisted_circle(self):
        comps = real_components(hyper(UPoly.of(1, 0, -1)))
        bits = {comps[0].id: 1}
        coh = twisted_cohomology(comps, bits)
        assert free_rank(coh.h0) == 0 and coh.h0.n_generators == 0
        assert free_rank(coh.h1) == 0 and invariant_factors(coh.h1) == (2,)

    def test_two_intervals(self):
        comps = real_components(PuncturedLine.make([0]))
        coh = twisted_cohomology(comps, untwisted(comps))
        assert free_rank(coh.h0) == 2
        assert coh.h1.n_generators == 0

    def test_h0_rank_bookkeeping(self):
        f = (UPoly.of(-1, 0, 1) * UPoly.of(-4, 0, 1)).scale(-1)
        comps = real_components(hyper(f))
        bits = {comps[0].id: 1, comps[1].id: 0}
        coh = twisted_cohomology(comps, bits)
        assert free_rank(coh.h0) == 1   # only the untwisted circle contributes


class TestBocksteinLadder:
    def corpus(self):
        return [
            real_components(PuncturedLine.make()),
            real_components(PuncturedLine.make([0])),
            real_components(PuncturedLine.make([0, 1])),
            real_components(ProjectiveLine()),
            real_components(hyper(UPoly.of(1, 0, -1))),
            real_components(hyper((UPoly.of(-1, 0, 1) * UPoly.of(-4, 0, 1)).scale(-1))),
            real_components(hyper(UPoly.of(0, -1, 0, 1), projective=True)),
            real_components(hyper(UPoly.of(-1, 0, -1))),   # empty locus
        ]

    def test_untwisted_ladders_exact(self):
        for comps in self.corpus():
            report = check_exact(bockstein_ladder(comps, untwisted(comps)))
            assert report.ok, report

    def test_twisted_ladders_exact(self):
        for comps in self.corpus():
            circles = [c.id for c in comps if c.is_circle]
            if not circles:
                continue
            for target in circles:
                bits = {c.id: (1 if c.id == target else 0) for c in comps}
                report = check_exact(bockstein_ladder(comps, bits))
                assert report.ok, report

    def test_twisted_circle_shape(self):
        comps = real_components(hyper(UPoly.of(1, 0, -1)))
        bits = {comps[0].id: 1}
        maps = bockstein_ladder(comps, bits)
        groups = [maps[0].target] + [m.target for m in maps[1:]]
        assert free_rank(groups[0]) == 0                      # H^0(Z(L)) = 0
        assert invariant_factors(groups[2]) == (2,)            # H^0(Z/2)
        assert invariant_factors(groups[3]) == (2,)            # H^1(Z(L))
        assert check_exact(maps).ok

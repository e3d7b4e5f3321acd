"""Verification suites shared by the CLI, the scripts and the acceptance tests.

A suite is a function of a Scenario returning a list of Check records.  Every
expected value carries a provenance tag: "paper" (a formula or value stated in
the source), "trivial" (holds by construction) or "derived" (computed by an
independent oracle in the same run).
"""
from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from . import breuil as br
from . import combinatorics as cb
from . import finite_group as fg
from . import padic_ps as pp
from .fontaine_laffaille import fl_dual, fl_invariant, fl_of_matrix
from .scalars import Fq, ProjPoint, is_prime, proj_invert

SCHEMA_VERSION = 1
SUITES = ("galois-pipeline", "operators-modp", "operators-padic", "type-elim", "lgc-identity")
PAPER, TRIVIAL, DERIVED = "paper", "trivial", "derived"


@dataclass(frozen=True)
class Scenario:
    p: int = 11
    f: int = 1
    triple: Tuple[int, int, int] = (6, 3, 0)
    case: Optional[str] = None
    fl: Optional[int] = None
    seed: int = 1
    precision: int = 12
    trials: int = 20

    def validate(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if not cb.is_generic(*self.triple, self.p):
            raise cb.NonGeneric(f"triple {self.triple} is not generic for p={self.p}")
        if self.f not in (1, 2):
            raise ValueError("f must be 1 or 2")
        if self.case is not None and self.case not in br.SHAPES:
            raise ValueError(f"case must be one of {br.SHAPES}")
        if self.fl is not None and self.fl % self.p == 0:
            raise ValueError("--fl must be a unit mod p")
        if self.precision < 6:
            raise ValueError("precision must be at least 6")
        if self.trials < 1:
            raise ValueError("trials must be positive")

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.seed}:{salt}")

    def to_json(self) -> dict:
        d = asdict(self)
        d["triple"] = list(self.triple)
        return d


@dataclass
class Check:
    name: str
    passed: bool
    values: Dict[str, object] = field(default_factory=dict)
    expected: object = None
    provenance: str = TRIVIAL

    def to_json(self) -> dict:
        return {"record": "check", "name": self.name, "status": "pass" if self.passed else "fail",
                "values": self.values, "expected": self.expected, "provenance": self.provenance}


def _pt(x: ProjPoint):
    return x.to_json()


# ---------------------------------------------------------------- galois pipeline


def _case_checks(sc: Scenario, shape: str) -> List[Check]:
    F = Fq(sc.p)
    rng = sc.rng(f"case-{shape}")
    got, want, route, diag_ok, rejected = [], [], True, True, 0
    for _ in range(sc.trials):
        smp = br.random_case_sample(shape, sc.triple, sc.p, rng)
        M, R, alphas = smp.module, smp.diagonalized, smp.alphas
        rejected += smp.rejected
        diag_ok &= tuple(R.diagonal[0]) == br.predicted_diagonal(shape, alphas)
        direct = br.breuil_to_fl(M)
        route &= br.breuil_to_fl(R.module) == direct
        got.append(_pt(direct))
        want.append(_pt(br.expected_case_fl(shape, alphas, F)))
    return [
        Check(f"pipeline.case{shape}.fl", got == want, {"fl": got, "rejected_draws": rejected}, want, PAPER),
        Check(f"pipeline.case{shape}.diagonal", diag_ok, {"trials": sc.trials}, "permuted constant terms", PAPER),
        Check(f"pipeline.case{shape}.route_independence", route, {"trials": sc.trials},
              "diagonalize-first equals direct", DERIVED),
    ]


def _niveau2_checks(sc: Scenario) -> List[Check]:
    F = Fq(sc.p, 2)
    rng = sc.rng("niveau2")
    unit = lambda: tuple(rng.randrange(1, F.q) for _ in range(2))
    direct, dual = [], []
    for _ in range(sc.trials):
        M = br.niveau2_module(unit(), unit(), unit(), unit(), unit(), sc.triple, sc.p)
        direct.append(_pt(br.breuil_to_fl(M)))
        dual.append(_pt(br.breuil_to_fl(br.dual_module(M))))
    return [
        Check("pipeline.niveau2.fl", all(x == "inf" for x in direct), {"fl": direct}, "inf", PAPER),
        Check("pipeline.niveau2.dual_fl", all(x == 0 for x in dual), {"fl": dual}, 0, PAPER),
    ]


def _fl_formula_checks(sc: Scenario) -> List[Check]:
    F = Fq(sc.p)
    rng = sc.rng("fl-formula")
    ok_formula, ok_mu, ok_dual = True, True, True
    for _ in range(sc.trials):
        a01, a12, mu1 = (rng.randrange(1, sc.p) for _ in range(3))
        a02 = rng.randrange(sc.p)
        U = [[rng.randrange(1, sc.p), a01, a02], [0, mu1, a12], [0, 0, rng.randrange(1, sc.p)]]
        x = fl_invariant(F, U)
        want = None if a02 == 0 else (a01 * a12 - a02 * mu1) * pow(-a02, -1, sc.p) % sc.p
        ok_formula &= x.value == want
        ok_mu &= x.value != mu1
        ok_dual &= fl_of_matrix(F, fl_dual(F, U)) == proj_invert(x)
    return [
        Check("fl.formula", ok_formula, {"trials": sc.trials}, "(a01 a12 - a02 mu1)/(-a02)", PAPER),
        Check("fl.not_mu1", ok_mu, {"trials": sc.trials}, "FL != mu1", PAPER),
        Check("fl.dual_inverse", ok_dual, {"trials": sc.trials}, "FL(dual) = 1/FL", PAPER),
    ]


def suite_galois_pipeline(sc: Scenario) -> List[Check]:
    out = _fl_formula_checks(sc)
    shapes = [sc.case] if sc.case else list(br.SHAPES)
    for shape in shapes:
        out += _niveau2_checks(sc) if shape == br.NIVEAU2 else _case_checks(sc, shape)
    return out


# ---------------------------------------------------------------- mod p operators


def suite_operators_modp(sc: Scenario) -> List[Check]:
    a2, a1, a0 = sc.triple
    p = sc.p
    S = fg.verify_S_observables(a2, a1, a0, p)
    L = fg.verify_lemma317(a2, a1, a0, p)
    U = fg.verify_uprime2(a2, a1, a0, p)
    R = fg.verify_weyl_operator(a2, a1, a0, p)
    out = [
        Check("modp.eigenspace_dim", S.dim_source == 1 and S.dim_source_prime == 1,
              {"dim": S.dim_source, "dim_prime": S.dim_source_prime}, 1, PAPER),
        Check("modp.S_value", L.ok, {"value": L.value, "direct_sum": L.direct_sum, "binomial": L.binomial},
              L.closed_form, PAPER),
        Check("modp.uprime2_value", U.value_at_cycle_inverse == 1, {"value": U.value_at_cycle_inverse}, 1, PAPER),
        Check("modp.uprime2_eigen", U.eigen_ok, {"lands_in": list(U.lands_in)}, list(U.lands_in), PAPER),
        Check("modp.weyl_operator", R.ok, {k: v for k, v in R.__dict__.items()}, "nonzero, T-graded, X-killed in V",
              DERIVED),
    ]
    for k, v in sorted(S.checks.items()):
        out.append(Check(f"modp.S.{k}", v, {}, True, PAPER))
    return out


# ---------------------------------------------------------------- p-adic operators


CHI_CHOICES = ((None, None, None), ("p(1+p)", 3, "p"), (1, "p", 5))


def _chi_value(spec, p):
    if spec == "p":
        return p
    if spec == "p(1+p)":
        return p * (1 + p)
    return spec


def random_integral_vector(chi, N: int, rng: random.Random) -> "pp.FlagVector":
    p = chi.p
    vals = [pp.PadicScalar.from_int(rng.randrange(p ** N), p, N) for _ in range(fg.flag_space(p).dim)]
    return pp.FlagVector.from_scalars(chi, vals, N)


def suite_operators_padic(sc: Scenario) -> List[Check]:
    a2, a1, a0 = sc.triple
    p, N = sc.p, sc.precision
    chi = pp.default_chi(a2, a1, a0, p)
    e1, e2 = pp.hecke_eigenvalues(chi, N)
    out = [
        Check("padic.pi_identity", pp.verify_lemma325(chi, N), {}, True, PAPER),
        Check("padic.hecke_eigenvalues", pp.verify_hecke_eigenvalues(chi, N), {"U1": repr(e1), "U2": repr(e2)},
              "chi1(p)^-1, (chi1 chi2)(p)^-1", PAPER),
        Check("padic.pi_squared_u2", pp.verify_pi_squared_u2(chi, N), {}, True, DERIVED),
    ]
    residues, oks = [], []
    for c1, c2, c0 in CHI_CHOICES:
        ch = pp.default_chi(a2, a1, a0, p, *(None if c is None else _chi_value(c, p) for c in (c1, c2, c0)))
        K = pp.compute_kappa(sc.triple, ch, N)
        residues.append(K.residue)
        oks.append(K.ok)
    want = pp.kappa_expected(a2, a1, a0, p)
    out.append(Check("padic.kappa", all(oks) and len(set(residues)) == 1,
                     {"residues": residues}, want, PAPER))
    J = pp.jacobi_kappas(a2, a1, a0, p, N)
    out.append(Check("padic.jacobi", J.ok, {"kappa1_val": J.kappa1.val, "kappa2_val": J.kappa2.val},
                     list(J.targets), PAPER))
    rng = sc.rng("reduction")
    ok = True
    for _ in range(min(sc.trials, 10)):
        F = random_integral_vector(chi, N, rng)
        ok &= pp.reduction_compatible(sc.triple, chi, F)
    out.append(Check("padic.reduction", ok, {"vectors": min(sc.trials, 10)}, True, DERIVED))
    return out


# ---------------------------------------------------------------- types and weights


def suite_type_elim(sc: Scenario) -> List[Check]:
    a2, a1, a0 = sc.triple
    p = sc.p
    n1 = cb.niveau1_allowed(a2, a1, a0, p)
    want1 = {cb.InertialTypeN1.make(p, a2, a1, a0), cb.InertialTypeN1.make(p, a2 - 1, a1, a0 + 1)}
    a, b = a2 - a0, a1 - a0
    fam = cb.niveau2_families(a, b, 0, p)["i"]
    want_i = [(-1, a + p * b + 1), (0, a + p * b - (p - 1)), (0, a + p * b), (1, a + p * b - p)]
    n2 = cb.niveau2_allowed(a2, a1, a0, p)
    forced = {t: cb.fl_forcing(a2, a1, a0, p, t) for t in n2}
    flagged = {(t.x, t.y): v for t, v in forced.items() if v}
    want_forced = {
        (lambda t: (t.x, t.y))(cb.InertialTypeN2.make(p, a0, a2 + 1 + p * (a1 - 1))): cb.INFINITY,
        (lambda t: (t.x, t.y))(cb.InertialTypeN2.make(p, a2, a0 - 1 + p * (a1 + 1))): cb.ZERO,
    }
    a, b, c = sc.triple
    L = cb.lemma443_list(a, b, c, p)
    bounds_ok = True
    for cls in (cb.GENERIC, cb.INFINITY, cb.ZERO):
        lo, up = cb.serre_weight_bounds(a, b, c, p, cls)
        bounds_ok &= lo <= up and up <= set(L) and all(w.restricted(p) for w in up)
    return [
        Check("types.niveau1", n1 == want1, {"types": sorted(t.exps for t in n1)},
              sorted(t.exps for t in want1), PAPER),
        Check("types.niveau2_family_i", sorted(fam) == sorted(want_i), {"pairs": sorted(fam)}, sorted(want_i), PAPER),
        Check("types.niveau2_nonzero", all(t.y % (p + 1) for t in n2), {"count": len(n2)}, "y != 0 mod p+1", PAPER),
        Check("types.fl_forcing", flagged == want_forced,
              {"flagged": sorted([list(k), v] for k, v in flagged.items())},
              sorted([list(k), v] for k, v in want_forced.items()), PAPER),
        Check("weights.candidates", len(set(L)) == 7 and all(w.restricted(p) for w in L),
              {"weights": [str(w) for w in L]}, 7, PAPER),
        Check("weights.bounds", bounds_ok, {}, "lower <= upper <= list", PAPER),
    ]


# ---------------------------------------------------------------- local-global constant


def suite_lgc_identity(sc: Scenario) -> List[Check]:
    a, b, c = sc.triple
    ts = [sc.fl] if sc.fl is not None else list(range(1, sc.p))
    out = []
    for t in ts:
        R = pp.lgc_demo(a, b, c, t % sc.p, sc.p, sc.precision)
        out.append(Check(f"lgc.t{t % sc.p:03d}", R.ok,
                         {"constant": R.constant_residue, "kappa": R.kappa.residue,
                          "identity_holds": R.identity_holds},
                         R.expected_residue, PAPER))
    return out


REGISTRY: Dict[str, Callable[[Scenario], List[Check]]] = {
    "galois-pipeline": suite_galois_pipeline,
    "operators-modp": suite_operators_modp,
    "operators-padic": suite_operators_padic,
    "type-elim": suite_type_elim,
    "lgc-identity": suite_lgc_identity,
}


def run_suite(name: str, sc: Scenario) -> List[Check]:
    sc.validate()
    names = SUITES if name == "all" else (name,)
    out: List[Check] = []
    for n in names:
        out += REGISTRY[n](sc)
    return sorted(out, key=lambda c: c.name)

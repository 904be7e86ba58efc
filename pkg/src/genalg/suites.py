"""Named verification suites and their reports."""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np


from .exact import GF, QQ, rank, trial_rng
from .ideals import (L_d_by_conditions, L_d_by_exclusion, dim_L_d, find_ideals_bruteforce,
                     ideal_locus_deficit, simplicity_verdict)
from .modular import (cu_bound, dif_value, discriminant_check, indecomposable_count, jordan_block,
                      numb, partitions, sym2_action, tensor_jordan, unipotent_of_type, verify_cu)
from .stabilizers import (automorphisms_bruteforce, fixed_space, projective_stabilizer_dim,
                          stabilizer_lie, trdeg_estimate)
from .tensors import basis_A, basis_C, make_m0, random_tensor
from .torus import (alpha_series, fixed_dim_by_weights, form_counts_table, h_bound,
                    series_by_form, verify_h2, weight_system)

DEFAULT_SEED = 1729

SUITES = ("dims", "weights", "hbound", "aut-m0", "genericity", "ideals-oracle",
          "modular", "dif", "trdeg", "normal-form")


class SuiteError(ValueError):
    pass


@dataclass
class CheckRecord:
    name: str
    status: str  # pass | fail | undetermined
    data: dict = field(default_factory=dict)


@dataclass
class VerificationReport:
    suite: str
    params: dict
    checks: list[CheckRecord]

    @property
    def status(self) -> str:
        if all(c.status == "pass" for c in self.checks):
            return "pass"
        return "fail" if any(c.status == "fail" for c in self.checks) else "undetermined"

    @property
    def exit_code(self) -> int:
        return 0 if self.status == "pass" else 1

    def to_dict(self) -> dict:
        return {"suite": self.suite, "params": self.params,
                "checks": [asdict(c) for c in self.checks], "status": self.status}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            data = json.dumps(c.data, sort_keys=True, separators=(",", ":"))
            lines.append(f"{self.suite}\t{c.name}\t{c.status}\t{data}")
        lines.append(f"{self.suite}\tSTATUS\t{self.status}")
        return "\n".join(lines) + "\n"


def _rec(name: str, ok: bool, **data) -> CheckRecord:
    return CheckRecord(name, "pass" if ok else "fail", data)


# --- suites ---------------------------------------------------------------------

_DIM_PRIME = GF(10007)


def _int_rows(basis) -> np.ndarray:
    return np.array([b.entries.reshape(-1) for b in basis]).astype(np.int64)


def suite_dims(n_max: int = 8, ld_max: int = 5) -> list[CheckRecord]:
    out = []
    for n in range(1, n_max + 1):
        # basis vectors have integer entries in {-1, 0, 1, 2}, so rank mod a large prime equals rank over Q
        dc = rank(_DIM_PRIME, _int_rows(basis_C(n)))
        da = rank(_DIM_PRIME, _int_rows(basis_A(n))) if n > 1 else 0
        out.append(_rec(f"dim-C-A/n={n}", dc == n * n * (n + 1) // 2 and da == (n - 1) * n * n // 2,
                        dim_C=dc, dim_A=da, dim_M=n ** 3))
    for n in range(1, ld_max + 1):
        for d in range(1, n + 1):
            a = L_d_by_exclusion(n, d, QQ).dim
            b = L_d_by_conditions(n, d, QQ).dim
            out.append(_rec(f"dim-L/n={n},d={d}", a == b == dim_L_d(n, d),
                            exclusion=a, conditions=b, formula=dim_L_d(n, d)))
    deficits = [ideal_locus_deficit(n, d) for n in range(2, 51) for d in range(1, n)]
    out.append(_rec("ideal-locus-deficit-positive/n<=50", min(deficits) > 0, min_deficit=min(deficits)))
    return out


def suite_weights(n_min: int = 2, n_max: int = 8) -> list[CheckRecord]:
    out = []
    for n in range(n_min, n_max + 1):
        ws = weight_system(n)
        total = sum(k for _, k in ws)
        out.append(_rec(f"multiplicity-sum/n={n}", total == n * n * (n + 1) // 2, total=total))
        for s in range(n - 1):
            series = alpha_series(n, s)
            counts = tuple(sum(1 for a in series if a.form == k) for k in range(1, 7))
            covered = sorted(w for a in series for w in a.weights)
            partition_ok = covered == sorted(w for w, _ in ws)
            lengths_ok = all(len(a.weights) == len(series_by_form(n, s)[a.form][0]) for a in series)
            out.append(_rec(f"alpha-series/n={n},s={s + 1}",
                            counts == form_counts_table(n) and partition_ok and lengths_ok,
                            counts=list(counts), table=list(form_counts_table(n))))
    return out


def _nonscalar_diagonal(rng, n: int, bound: int, field):
    while True:
        if field.is_rational:
            vals = [int(rng.integers(1, bound + 1)) * (1 if rng.integers(0, 2) else -1) for _ in range(n)]
        else:
            vals = [int(rng.integers(1, field.p)) for _ in range(n)]
        if len(set(vals)) > 1:
            return vals


def suite_hbound(seed: int = DEFAULT_SEED, samples: int = 500, bound: int = 4) -> list[CheckRecord]:
    out = [_rec("h2/n=2..50", all(verify_h2(n) for n in range(2, 51)),
                h=[h_bound(n) for n in (2, 3, 4)])]
    for fi, f in enumerate((QQ, GF(7))):
        for n in (3, 4):
            k = samples if f.is_rational else max(1, samples // 5)
            worst, bad_bound, bad_weight = 0, [], []
            for t in range(k):
                rng = trial_rng(seed, 8, fi, n, t)
                vals = _nonscalar_diagonal(rng, n, bound, f)
                g = f.zeros((n, n))
                for i, v in enumerate(vals):
                    g[i, i] = f(v)
                dim = fixed_space(g, "C", f).dim
                worst = max(worst, dim)
                if dim > h_bound(n):
                    bad_bound.append(vals)
                if dim != fixed_dim_by_weights(vals, f):
                    bad_weight.append(vals)
            out.append(_rec(f"fixed-bound/{f}/n={n}", not bad_bound and not bad_weight,
                            samples=k, max_fixed_dim=worst, h=h_bound(n),
                            bound_violations=bad_bound[:5], weight_mismatches=bad_weight[:5]))
    return out


def suite_aut_m0(cases=((2, 3), (2, 5), (3, 3))) -> list[CheckRecord]:
    out = []
    for n, p in cases:
        auts = automorphisms_bruteforce(make_m0(n, GF(p)))
        out.append(_rec(f"aut-m0/n={n},p={p}", len(auts) == math.factorial(n),
                        count=len(auts), expected=math.factorial(n)))
    return out


def suite_genericity(seed: int = DEFAULT_SEED, samples: int = 100, n: int = 3, bound: int = 9,
                     projective_samples: int = 50) -> list[CheckRecord]:
    stab_bad, simple_bad = [], []
    for t in range(samples):
        m = random_tensor("C", n, QQ, trial_rng(seed, 4, t), bound)
        if stabilizer_lie(m).dim != 0:
            stab_bad.append(t)
        if simplicity_verdict(m).status != "simple":
            simple_bad.append(t)
    proj_bad = []
    for t in range(projective_samples):
        m = random_tensor("C", n, QQ, trial_rng(seed, 11, t), bound)
        if projective_stabilizer_dim(m) != 1:
            proj_bad.append(t)
    return [
        _rec(f"lie-stabilizer-trivial/C,n={n}", not stab_bad, samples=samples, failures=stab_bad),
        _rec(f"simple/C,n={n}", not simple_bad, samples=samples, failures=simple_bad),
        _rec(f"projective-stabilizer-center/C,n={n}", not proj_bad, samples=projective_samples,
             failures=proj_bad),
    ]


def suite_ideals_oracle(seed: int = DEFAULT_SEED, samples: int = 200, p: int = 5, n: int = 2) -> list[CheckRecord]:
    f = GF(p)
    tally = {"simple": 0, "not_simple": 0, "undetermined": 0}
    disagree = []
    for t in range(samples):
        m = random_tensor("M", n, f, trial_rng(seed, 6, t))
        v = simplicity_verdict(m)
        tally[v.status] += 1
        ideals = [S for d in range(1, n) for S in find_ideals_bruteforce(m, d)]
        if (v.status == "simple" and ideals) or (v.status == "not_simple" and not ideals):
            disagree.append(t)
    m0 = make_m0(n, f)
    found = find_ideals_bruteforce(m0, 1)
    units = [[f.one if i == k else f.zero for i in range(n)] for k in range(n)]
    expected_ok = len(found) == n and all(any(S.contains(u) for u in units) for S in found)
    verdict = simplicity_verdict(m0)
    return [
        _rec(f"verdict-vs-enumeration/F_{p},n={n}", not disagree, samples=samples,
             disagreements=disagree, **tally),
        _rec(f"m0-ideals/F_{p},n={n}", expected_ok and verdict.status == "not_simple",
             ideals=[[f.format(x) for x in S.basis[0]] for S in found]),
    ]


def suite_modular(seed: int = DEFAULT_SEED) -> list[CheckRecord]:
    out = []
    for p in (3, 5, 7):
        bad = [(a, b) for a in range(1, p + 1) for b in range(1, p + 1)
               if len(tensor_jordan(a, b, p)) != min(a, b)]
        out.append(_rec(f"tensor-min/p={p}", not bad, failures=bad))
    for n in (3, 4, 5):
        for p in (3, 5):
            f = GF(p)
            rows = []
            ok = True
            for part in partitions(n):
                if part[0] == 1:
                    continue
                u = unipotent_of_type(part, f)
                d = fixed_space(u, "C", f).dim
                cnt = indecomposable_count(u, f)
                good = verify_cu(u, n, f) and cnt == len(part)
                ok &= good
                rows.append({"type": list(part), "dim_fixed": d, "bound": cu_bound(n, part[0])})
            out.append(_rec(f"cu-bound/n={n},p={p}", ok, types=rows))
    for p in (3, 5, 7):
        f = GF(p)
        counts = {s: indecomposable_count(sym2_action(jordan_block(s, f), f), f) for s in range(2, p + 1)}
        out.append(_rec(f"sym2-count/p={p}", all(c <= s - 1 for s, c in counts.items()),
                        counts={str(k): v for k, v in counts.items()}))
    f = GF(5)
    bad = []
    for t in range(100):
        rng = trial_rng(seed, 9, t)
        P = _random_partition(rng, 5, int(rng.integers(1, 7)))
        Q = _random_partition(rng, 5, int(rng.integers(1, 7)))
        A, B = unipotent_of_type(P, f), unipotent_of_type(Q, f)
        lhs = indecomposable_count(np.kron(A, B), f)
        rhs = indecomposable_count(A, f) * B.shape[0]
        if lhs > rhs:
            bad.append({"P": list(P), "Q": list(Q)})
    out.append(_rec("tensor-count-inequality/F_5", not bad, samples=100, failures=bad))
    return out


def _random_partition(rng, max_part: int, total: int) -> tuple[int, ...]:
    parts = []
    while total > 0:
        k = int(rng.integers(1, min(max_part, total) + 1))
        parts.append(k)
        total -= k
    return tuple(sorted(parts, reverse=True))


def suite_dif(n_max: int = 100) -> list[CheckRecord]:
    pos_bad, id_bad = [], []
    for n in range(2, n_max + 1):
        for s in range(2, n + 1):
            v = dif_value(n, s)
            if v <= 0:
                pos_bad.append((n, s))
            if v != 2 * (n * n * (n + 1) // 2 - numb(n, s)):
                id_bad.append((n, s))
    disc_bad = [s for s in range(2, n_max + 1) if not discriminant_check(s)]
    return [
        _rec(f"dif-positive/n<={n_max}", not pos_bad, failures=pos_bad[:10]),
        _rec(f"dif-identity/n<={n_max}", not id_bad, failures=id_bad[:10]),
        _rec(f"discriminant-negative/s<={n_max}", not disc_bad, failures=disc_bad),
    ]


TRDEG_EXPECTED = {("M", 2): 4, ("C", 2): 2, ("M", 3): 18, ("C", 3): 9}


def suite_trdeg(seed: int = DEFAULT_SEED, samples: int = 50, cases=None) -> list[CheckRecord]:
    out = []
    for space, n in cases or TRDEG_EXPECTED:
        expected = n ** 3 - n * n if space == "M" else (n - 1) * n * n // 2
        got = trdeg_estimate(space, n, samples, seed)
        out.append(_rec(f"trdeg/{space},n={n}", got == expected, value=got, expected=expected))
    return out


def suite_normal_form(seed: int = DEFAULT_SEED, trials: int = 50, magnitude: float = 0.1,
                      cases=((2, "C"), (2, "M"), (3, "C"), (3, "M"))) -> list[CheckRecord]:
    from .normal_form import build_slice, roundtrip_test
    out = []
    for n, space in cases:
        r = roundtrip_test(n, space, seed, trials, magnitude, restarts=5)
        spread = max((t.restart_spread or 0.0) for t in r.trials) if r.trials else 0.0
        dim_ok = build_slice(n, space).dim == TRDEG_EXPECTED.get((space, n), build_slice(n, space).dim)
        out.append(_rec(f"roundtrip/{space},n={n}", r.passed and dim_ok, trials=trials,
                        max_z_error=float(f"{r.max_z_error:.3e}"), max_g_error=float(f"{r.max_g_error:.3e}"),
                        max_restart_spread=float(f"{spread:.3e}"),
                        failures=[t.trial for t in r.trials if not t.passed]))
    return out


# --- dispatch ------------------------------------------------------------------------

def _suite_args(name: str, params: dict) -> dict:
    seed = params.get("seed", DEFAULT_SEED)
    samples = params.get("samples")
    n, p, space = params.get("n"), params.get("p"), params.get("space")
    if name == "dims":
        return {"n_max": n or 8}
    if name == "weights":
        return {"n_max": n or 8}
    if name == "hbound":
        return {"seed": seed, "samples": samples or 500}
    if name == "aut-m0":
        if (n is None) != (p is None):
            raise SuiteError("aut-m0 takes both --n and --prime, or neither")
        return {"cases": ((n, p),)} if n else {}
    if name == "genericity":
        return {"seed": seed, "samples": samples or 100, "n": n or 3, "bound": params.get("bound") or 9}
    if name == "ideals-oracle":
        return {"seed": seed, "samples": samples or 200, "p": p or 5, "n": n or 2}
    if name == "modular":
        return {"seed": seed}
    if name == "dif":
        return {"n_max": n or 100}
    if name == "trdeg":
        cases = None
        if n or space:
            cases = [(sp, k) for sp, k in TRDEG_EXPECTED if (not space or sp == space) and (not n or k == n)]
            if not cases:
                cases = [(space or "M", n or 2)]
        return {"seed": seed, "samples": samples or 50, "cases": cases}
    if name == "normal-form":
        cases = [(k, sp) for k in ((n,) if n else (2, 3)) for sp in ((space,) if space else ("C", "M"))]
        return {"seed": seed, "trials": samples or 50, "cases": cases}
    raise SuiteError(f"unknown suite {name!r}")


_RUNNERS = {
    "dims": suite_dims, "weights": suite_weights, "hbound": suite_hbound, "aut-m0": suite_aut_m0,
    "genericity": suite_genericity, "ideals-oracle": suite_ideals_oracle, "modular": suite_modular,
    "dif": suite_dif, "trdeg": suite_trdeg, "normal-form": suite_normal_form,
}


def _run_one(name: str, params: dict) -> VerificationReport:
    checks = _RUNNERS[name](**_suite_args(name, params))
    return VerificationReport(name, params, checks)


def run_suite(name: str, params: dict | None = None, jobs: int = 1) -> VerificationReport:
    """Run a named suite (or ``"all"``); the report depends only on ``name`` and ``params``."""
    params = {k: v for k, v in (params or {}).items() if v is not None}
    params.setdefault("seed", DEFAULT_SEED)
    if name == "all":
        base = {"seed": params["seed"]}
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                reports = list(ex.map(_run_one, SUITES, [base] * len(SUITES)))
        else:
            reports = [_run_one(s, base) for s in SUITES]
        checks = [CheckRecord(f"{r.suite}/{c.name}", c.status, c.data) for r in reports for c in r.checks]
        return VerificationReport("all", params, checks)
    if name not in _RUNNERS:
        raise SuiteError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    return _run_one(name, params)

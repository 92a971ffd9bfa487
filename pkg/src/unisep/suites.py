"""Verification suites and their JSON reports.

A report has a ``body`` that is a pure function of (suite, seed, options) and a
``header`` holding wall-clock data (timestamp, runtimes).  Records marked
``asserted`` decide the exit status; the others are informational.
"""

from __future__ import annotations

import json
import math
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from . import weights as W
from .bitmatrix import BitMatrix
from .builders import Built, build, diagonal_sum, permutation_module
from .cache import get_store
from .groups import (
    CapExceeded, ElementStore, ProductReplacement, batch_orbit_counts, conjugating_element,
    element_order, enumerate_group,
)
from .matio import format_matrix
from .meataxe import (
    DEFAULT_SEED, NotSymplectic, RandomBudgetExhausted, UnisingularVerdict, composition_factor_dims,
    fixed_space_dim, has_trivial_composition_factor, is_absolutely_irreducible,
    is_irreducible, is_unisingular, symplectic_certificate,
)

SCHEMA_VERSION = 1
SUITES = ("sp8", "affine", "steinberg", "weights", "obstructions", "sums")

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_UNPROVEN = 3


@dataclass
class Options:
    seed: int = 0
    threads: int = 1
    sampled_ok: bool = False
    use_cache: bool = False
    samples: int = 10_000
    grid: "WeightGrid | None" = None
    # task names to run; an entry ending in "/" selects every task under that prefix
    only: tuple[str, ...] | None = None

    def selects(self, name: str) -> bool:
        if self.only is None:
            return True
        return any(name == k or (k.endswith("/") and name.startswith(k)) for k in self.only)


# -- records ---------------------------------------------------------------------------------------------


def record(rid: str, claim: str, asserted: bool, passed: bool | None, mode: str = "exact", **fields) -> dict:
    r = {"id": rid, "claim": claim, "asserted": asserted, "mode": mode}
    if passed is None:
        r["status"] = "info"
    elif mode == "sampled" and passed:
        r["status"] = "sampled"
    else:
        r["status"] = "pass" if passed else "fail"
    r["passed"] = passed
    r.update(fields)
    return r


def skipped(rid: str, claim: str, why: str) -> dict:
    r = record(rid, claim, True, False, mode="skipped", reason=why)
    r["status"] = "skipped"
    return r


def element_text(x) -> str:
    if isinstance(x, tuple):
        return " ".join(str(v) for v in x)
    return format_matrix(x)


def _verdict_fields(v: UnisingularVerdict) -> dict:
    out = {"unisingular": v.status, "checked": v.checked, "unisingular_mode": v.mode}
    if v.witness is not None:
        out["witness"] = element_text(v.witness)
        out["witness_image"] = format_matrix(v.witness_image)
        out["witness_order"] = element_order(v.witness_image)
    return out


def _symplectic(b: Built, seed: int) -> bool:
    if b.form is not None:
        return b.form.is_symplectic_for(b.module)
    try:
        return symplectic_certificate(b.module, seed).is_symplectic_for(b.module)
    except NotSymplectic:
        return False


def analyze(b: Built, store: ElementStore | None, seed: int, *, absolute: bool = True, factors: bool = True,
            forms: bool = True, center: bool = False, samples: int | None = None) -> dict:
    """Module facts for one built group; the store gives the exhaustive mode."""
    m = b.module
    s = DEFAULT_SEED + seed
    out: dict = {"dim": m.dim, "field": m.field.q}
    if store is not None:
        out["order"] = store.order
    irr = is_irreducible(m, s)
    out["irreducible"] = irr.irreducible
    out["absolutely_irreducible"] = (is_absolutely_irreducible(m, s) if irr.irreducible else False) if absolute else None
    if factors:
        out["factor_dims"] = [d for d, _ in composition_factor_dims(m, s)]
        out["has_trivial_factor"] = has_trivial_composition_factor(m, s)
    if forms:
        out["symplectic"] = _symplectic(b, s)
    if center and store is not None:
        out["center_order"] = len(store.center())
        out["fixed_space_dim"] = fixed_space_dim(m)
    if store is not None:
        v = is_unisingular(m, store)
    else:
        v = is_unisingular(m, samples=samples, spec=b.spec, seed=seed)
    out.update(_verdict_fields(v))
    return out


# -- reports ------------------------------------------------------------------------------------------------


@dataclass
class Report:
    suite: str
    seed: int
    sampled_ok: bool
    records: list[dict]
    runtimes: dict = dc_field(default_factory=dict)
    generated: str = ""

    @property
    def asserted(self) -> list[dict]:
        return [r for r in self.records if r["asserted"]]

    @property
    def status(self) -> str:
        a = self.asserted
        if any(r["status"] in ("fail", "skipped") for r in a):
            return "fail"
        if any(r["status"] == "sampled" for r in a) and not self.sampled_ok:
            return "unproven"
        return "pass"

    @property
    def exit_code(self) -> int:
        return {"pass": EXIT_PASS, "fail": EXIT_FAIL, "unproven": EXIT_UNPROVEN}[self.status]

    def body(self) -> dict:
        modes = sorted({r["mode"] for r in self.records})
        return {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "seed": self.seed,
            "version": __version__,
            "sampled_ok": self.sampled_ok,
            "modes": modes,
            "status": self.status,
            "summary": {
                "records": len(self.records),
                "asserted": len(self.asserted),
                "passed": sum(1 for r in self.asserted if r["status"] == "pass"),
                "sampled": sum(1 for r in self.asserted if r["status"] == "sampled"),
                "failed": sum(1 for r in self.asserted if r["status"] in ("fail", "skipped")),
            },
            "records": self.records,
        }

    def body_json(self) -> str:
        return json.dumps(self.body(), sort_keys=True, indent=1)

    def to_json(self) -> str:
        doc = {"header": {"generated": self.generated, "runtimes": self.runtimes}, "body": self.body()}
        return json.dumps(doc, sort_keys=True, indent=1)

    def lines(self) -> list[str]:
        out = []
        for r in self.records:
            tag = r["status"].upper() if r["asserted"] else "info"
            out.append(f"[{tag:>8}] {r['id']}: {r['claim']}")
        out.append(f"suite {self.suite}: {self.status} ({self.body()['summary']})")
        return out


def _run(tasks: list, threads: int) -> tuple[list[dict], dict]:
    """Run (name, fn) tasks; fn returns a list of records.  Output order is the task order."""

    def timed(task):
        name, fn = task
        t = time.perf_counter()
        try:
            recs = fn()
        except CapExceeded as e:
            recs = [skipped(name, "enumeration", f"skipped (too large): {e}")]
        except RandomBudgetExhausted as e:
            recs = [skipped(name, "meataxe", f"skipped (random budget): {e}")]
        return recs, round(time.perf_counter() - t, 3)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(timed, tasks))
    else:
        results = [timed(t) for t in tasks]
    records, runtimes = [], {}
    for (name, _), (recs, dt) in zip(tasks, results):
        records.extend(recs)
        runtimes[name] = dt
    return records, runtimes


def run_suite(sid: str, options: Options | None = None) -> Report:
    opt = options or Options()
    if sid not in SUITES:
        raise KeyError(f"unknown suite {sid!r}; choose from {', '.join(SUITES)}")
    tasks = [t for t in _SUITE_TASKS[sid](opt) if opt.selects(t[0])]
    records, runtimes = _run(tasks, opt.threads)
    return Report(sid, opt.seed, opt.sampled_ok, records, runtimes,
                  datetime.now(timezone.utc).isoformat(timespec="seconds"))


def _store(b: Built, opt: Options) -> ElementStore:
    return get_store(b.spec, opt.use_cache)


# -- sp8: the classification inside Sp_8(2) ------------------------------------------------------------------

MAXIMAL = ("agl2_3", "l3_2_2")
SUBGROUPS = ("psu3_2", "psu3_2_2", "psu3_2_3", "agl1_9", "asl2_3", "agammal1_9", "sl3_2")
AFFINE_OVERGROUP = {"psu3_2": "agl2_3", "psu3_2_2": "agl2_3", "psu3_2_3": "agl2_3", "agl1_9": "agl2_3",
                    "asl2_3": "agl2_3", "agammal1_9": "agl2_3", "3^2:D16": "agl2_3", "3^2:C8": "agl2_3"}
NEGATIVE = ("s10", "sp4_2_wr_s2")
TABLE_INFO = ("s9", "a9", "a10", "3^2:D16", "3^2:C8")


def _sp8_positive(rid: str, opt: Options, maximal: bool):
    def fn():
        b = build(rid)
        st = _store(b, opt)
        a = analyze(b, st, opt.seed, center=True)
        ok_order = st.order == b.recipe.order
        if maximal:
            ok = (ok_order and a["unisingular"] == "true" and a["irreducible"] and a["absolutely_irreducible"]
                  and a["symplectic"] and a["center_order"] == 1 and a["fixed_space_dim"] == 0)
            claim = "maximal fixed-point group: unisingular, absolutely irreducible, symplectic"
        else:
            ok = ok_order and a["unisingular"] == "true" and a["symplectic"]
            claim = "listed subgroup: exhaustively unisingular on the 8-dim symplectic module"
        return [record(f"sp8/{rid}", claim, True, ok, "exhaustive", recipe=rid, **a)]
    return fn


def _sp8_containment(child: str, parent: str, opt: Options):
    def fn():
        cb, pb = build(child), build(parent)
        pst = _store(pb, opt)
        if pb.spec.kind == "perm":
            gens_in = all(pst.contains(g) for g in cb.spec.generators)
            same_form = cb.form is not None and pb.form is not None and cb.form.gram == pb.form.gram
            form_ok = same_form and cb.form.is_invariant(cb.module)
            how = "generators lie in the parent permutation group; both modules carry the same sum-zero form"
        else:
            img = enumerate_group(pb.module.group_spec(parent))
            gens_in = all(img.contains(g) for g in cb.module.action)
            cert = symplectic_certificate(pb.module, DEFAULT_SEED + opt.seed)
            form_ok = cert.is_symplectic_for(pb.module) and cert.is_invariant(cb.module)
            how = "module generators lie in the parent image; the parent's symplectic form is invariant"
        ok = gens_in and form_ok
        return [record(f"sp8/contain/{child}<{parent}", f"{child} embeds in {parent} compatibly with the form",
                       True, ok, "exhaustive", generators_contained=gens_in, form_compatible=form_ok, method=how)]
    return fn


def _sp8_negative(rid: str, opt: Options):
    def fn():
        b = build(rid)
        st = _store(b, opt)
        a = analyze(b, st, opt.seed, factors=False)
        ok = a["irreducible"] and a["unisingular"] == "false" and "witness" in a and a["symplectic"]
        return [record(f"sp8/{rid}", "irreducible in Sp_8(2) but not unisingular (witness given)",
                       True, ok, "exhaustive", recipe=rid, **a)]
    return fn


def _sp8_info(rid: str, opt: Options):
    def fn():
        b = build(rid)
        st = _store(b, opt)
        a = analyze(b, st, opt.seed, factors=False)
        return [record(f"sp8/{rid}", "status computed, not asserted", False, None, "exhaustive", recipe=rid, **a)]
    return fn


def _sp8_lists(opt: Options):
    def fn():
        p = _store(build("agl2_3"), opt)
        st = {r: enumerate_group(build(r).spec) for r in ("psu3_2_2", "agammal1_9", "3^2:D16", "psu3_2_3", "asl2_3")}
        c1 = conjugating_element(p, st["psu3_2_2"], st["agammal1_9"])
        c2 = conjugating_element(p, st["3^2:D16"], st["agammal1_9"])
        c3 = conjugating_element(p, st["psu3_2_3"], st["asl2_3"])
        recs = [
            record("sp8/lists/agammal1_9", "AGammaL_1(9) appears in one subgroup list but not the other; "
                   "computed: it is conjugate in AGL_2(3) to PSU_3(2):2", False, None, "exhaustive",
                   conjugate=c1 is not None, conjugator=element_text(c1) if c1 is not None else None),
            record("sp8/lists/3^2:D16", "the order-16 point stabiliser inside GL_2(3) is semidihedral; "
                   "3^2:SD16 is conjugate to AGammaL_1(9)", False, None, "exhaustive",
                   conjugate=c2 is not None, conjugator=element_text(c2) if c2 is not None else None),
            record("sp8/lists/psu3_2_3", "PSU_3(2):3 and ASL_2(3) are conjugate in AGL_2(3)", False, None,
                   "exhaustive", conjugate=c3 is not None),
            record("sp8/lists/psu2_3", "a subgroup list names PSU_2(3); order 72 and the 3^2:Q8 structure "
                   "identify it as PSU_3(2)", False, None, "exact", read_as="psu3_2"),
        ]
        return recs
    return fn


def _sp8_tasks(opt: Options) -> list:
    tasks = [(f"sp8/{r}", _sp8_positive(r, opt, True)) for r in MAXIMAL]
    tasks += [(f"sp8/{r}", _sp8_positive(r, opt, False)) for r in SUBGROUPS]
    tasks += [(f"sp8/contain/{c}", _sp8_containment(c, p, opt)) for c, p in sorted(AFFINE_OVERGROUP.items())]
    tasks.append(("sp8/contain/sl3_2", _sp8_containment("sl3_2", "l3_2_2", opt)))
    tasks += [(f"sp8/{r}", _sp8_negative(r, opt)) for r in NEGATIVE]
    tasks += [(f"sp8/{r}", _sp8_info(r, opt)) for r in TABLE_INFO]
    tasks.append(("sp8/lists", _sp8_lists(opt)))
    return tasks


# -- affine groups ----------------------------------------------------------------------------------------------

AFFINE_CASES = (("agl2_3", 2, 3), ("agl1_9", 1, 9), ("agl2_5", 2, 5), ("agl3_3", 3, 3))


def _affine_case(rid: str, n: int, q: int, opt: Options):
    def fn():
        b = build(rid)
        st = _store(b, opt)
        a = analyze(b, st, opt.seed, absolute=False, forms=True, center=True)
        maxo = st.max_element_order()
        orbits = int(batch_orbit_counts(st.data).min())
        ok = (st.order == b.recipe.order and a["irreducible"] and a["unisingular"] == "true"
              and not a["has_trivial_factor"] and maxo < q ** n and orbits >= 2 and a["symplectic"])
        return [record(f"affine/{rid}", f"AGL_{n}({q}): irreducible, unisingular, no trivial factor, "
                       f"max element order < {q ** n}", True, ok, "exhaustive", recipe=rid,
                       max_element_order=maxo, min_orbit_count=orbits, **a)]
    return fn


def _affine_excluded(opt: Options):
    def fn():
        b = build("agl1_3")
        st = _store(b, opt)
        v = is_unisingular(b.module, st)
        f = _verdict_fields(v)
        ok = v.status == "false" and f.get("witness_order") == 3
        return [record("affine/agl1_3", "excluded case n=1, q=3: a translation of order 3 has no eigenvalue 1",
                       True, ok, "exhaustive", recipe="agl1_3", order=st.order, **f)]
    return fn


def _affine_tasks(opt: Options) -> list:
    tasks = [(f"affine/{r}", _affine_case(r, n, q, opt)) for r, n, q in AFFINE_CASES]
    tasks.append(("affine/agl1_3", _affine_excluded(opt)))
    return tasks


# -- Steinberg modules ----------------------------------------------------------------------------------------

STEINBERG_EXHAUSTIVE = ("sl3_2", "sl4_2", "sp4_2")
SL2_NEGATIVE = (("sl2_2", 2), ("sl2_4", 4), ("sl2_8", 8))


def _st_exhaustive(rid: str, opt: Options):
    def fn():
        b = build(rid)
        st = _store(b, opt)
        a = analyze(b, st, opt.seed, factors=False, forms=False)
        ok = a["unisingular"] == "true" and a["irreducible"] and a["absolutely_irreducible"]
        return [record(f"steinberg/{rid}", f"Steinberg module of dim {a['dim']} is unisingular (exhaustive)",
                       True, ok, "exhaustive", recipe=rid, **a)]
    return fn


def _st_sampled(rid: str, opt: Options):
    def fn():
        b = build(rid)
        a = analyze(b, None, opt.seed, absolute=False, factors=False, forms=False, samples=opt.samples)
        passed = a["irreducible"] and a["unisingular"] == "sampled-true"
        return [record(f"steinberg/{rid}", f"Steinberg module of dim {a['dim']}: {opt.samples} sampled elements "
                       "all have eigenvalue 1 (necessary condition only)", True, passed,
                       "sampled", recipe=rid, flags=b.extra.get("flags"), **a)]
    return fn


def _st_sl2(rid: str, q: int, opt: Options):
    def fn():
        b = build(rid)
        st = _store(b, opt)
        a = analyze(b, st, opt.seed, factors=False, forms=False)
        ok = a["irreducible"] and a["unisingular"] == "false" and a.get("witness_order") == q + 1
        return [record(f"steinberg/{rid}", f"SL_2({q}) Steinberg module is not unisingular; "
                       f"witness of order {q + 1}", True, ok, "exhaustive", recipe=rid, **a)]
    return fn


def _steinberg_tasks(opt: Options) -> list:
    tasks = [(f"steinberg/{r}", _st_exhaustive(r, opt)) for r in STEINBERG_EXHAUSTIVE]
    tasks.append(("steinberg/sp6_2_st", _st_sampled("sp6_2_st", opt)))
    tasks += [(f"steinberg/{r}", _st_sl2(r, q, opt)) for r, q in SL2_NEGATIVE]
    return tasks


# -- obstructions ---------------------------------------------------------------------------------------------------


def sp_order(n: int, q: int = 2) -> int:
    return q ** (n * n) * math.prod(q ** (2 * i) - 1 for i in range(1, n + 1))


def _obs_sp6(opt: Options):
    def fn():
        b = build("sp6_2")
        st = _store(b, opt)
        orders = st.element_orders()
        spectrum = sorted(set(int(o) for o in np.unique(orders)))
        return [
            record("obstructions/sp6_2/order", "exhaustive Sp_6(2) order equals the order formula and 17 does not "
                   "divide it", True, st.order == sp_order(3) and st.order % 17 != 0, "exhaustive",
                   order=st.order),
            record("obstructions/sp6_2/no21", "Sp_6(2) has no element of order 21 (exhaustive)", True,
                   21 not in spectrum, "exhaustive", element_orders=spectrum),
        ]
    return fn


def _obs_d8(opt: Options):
    def fn():
        b = build("3^2:D8")
        s = DEFAULT_SEED + opt.seed
        irr = is_irreducible(b.module, s)
        dims8 = [d for d, _ in composition_factor_dims(b.module, s)]
        dims9 = [d for d, _ in composition_factor_dims(permutation_module(b.spec), s)]
        return [record("obstructions/3^2:D8", "3^2:D8 on 9 points gives a reducible 8-dim module; the "
                       "permutation module has factors 1, 4, 4", True,
                       (not irr.irreducible) and dims9 == [1, 4, 4], "exact", order=enumerate_group(b.spec).order,
                       factor_dims_8=dims8, factor_dims_9=dims9)]
    return fn


def _find_order(walk, target: int, budget: int):
    for k in range(budget):
        x = walk.next()
        o = element_order(x)
        if o % target == 0:
            return x.__pow__(o // target), k + 1
    return None, budget


def _obs_sp8(opt: Options):
    def fn():
        b = build("sp8_2")
        gram = b.form.gram
        preserved = all(g @ gram @ g.transpose() == gram for g in b.spec.generators)
        out = [record("obstructions/sp8_2/generators", "Sp_8(2) generators preserve the standard alternating "
                      "form", True, preserved, "exact", order_formula=sp_order(4))]
        walk = ProductReplacement(b.spec, opt.seed)
        for target in (17, 21):
            x, used = _find_order(walk, target, 20_000)
            if x is None:
                out.append(skipped(f"obstructions/sp8_2/order{target}", "element search", "not found"))
                continue
            fixed_free = x.det_one_minus() != 0
            out.append(record(f"obstructions/sp8_2/order{target}", f"an element of order {target} in Sp_8(2) "
                              "has no eigenvalue 1", True, fixed_free, "exact", samples_used=used,
                              element=element_text(x)))
        return out
    return fn


def _obs_no5(opt: Options):
    def fn():
        recs = []
        for rid in MAXIMAL:
            st = _store(build(rid), opt)
            spectrum = sorted(set(int(o) for o in np.unique(st.element_orders())))
            ok = not any(o % 5 == 0 or o % 17 == 0 or o % 21 == 0 for o in spectrum)
            recs.append(record(f"obstructions/{rid}/orders", "no element of order 5, 17 or 21", True, ok,
                               "exhaustive", element_orders=spectrum))
        return recs
    return fn


def _obstruction_tasks(opt: Options) -> list:
    return [("obstructions/sp6_2", _obs_sp6(opt)), ("obstructions/3^2:D8", _obs_d8(opt)),
            ("obstructions/sp8_2", _obs_sp8(opt)), ("obstructions/orders", _obs_no5(opt))]


# -- sums ----------------------------------------------------------------------------------------------------------

SUM_CASES = (("e9_sp8", "order-9 group in Sp_8(2)"), ("e27_sp10", "order-27 group in Sp_10(2)"),
             ("agl2_3_plus_sp2", "AGL_2(3) x Sp_2(2) in Sp_10(2)"))
UNISINGULAR_POOL = ("agl2_3", "asl2_3", "psu3_2", "agl1_9", "l3_2_2", "sl3_2", "e9_sp8")
ARBITRARY_POOL = ("sl2_2", "sp2_2", "c3_sp2", "agl1_3", "sl3_2", "3^2:D8", "psu3_2", "agl1_9", "3^2:C8")


def _sum_case(rid: str, what: str, opt: Options):
    def fn():
        b = build(rid)
        st = _store(b, opt)
        a = analyze(b, st, opt.seed, absolute=False, forms=True)
        ok = a["unisingular"] == "true" and not a["has_trivial_factor"] and a["symplectic"]
        return [record(f"sums/{rid}", f"{what}: unisingular with no trivial composition factor", True, ok,
                       "exhaustive", recipe=rid, **a)]
    return fn


def _with_form(rid: str, seed: int) -> Built:
    b = build(rid)
    if b.form is None:
        b.form = symplectic_certificate(b.module, DEFAULT_SEED + seed)
    return b


def _random_sums(opt: Options, count: int = 20):
    def fn():
        rng = random.Random(opt.seed)
        recs = []
        for k in range(count):
            u = rng.choice(UNISINGULAR_POOL)
            x = rng.choice(ARBITRARY_POOL)
            s = diagonal_sum(_with_form(u, opt.seed), _with_form(x, opt.seed), "direct-product", f"{u}+{x}")
            st = enumerate_group(s.spec)
            v = is_unisingular(s.module, st)
            form_ok = s.form.is_symplectic_for(s.module)
            recs.append(record(f"sums/random/{k:02d}", f"{u} (unisingular) summed with {x} is unisingular",
                               True, v.status == "true" and form_ok, "exhaustive", left=u, right=x,
                               order=st.order, dim=s.module.dim, **_verdict_fields(v)))
        return recs
    return fn


def _sum_tasks(opt: Options) -> list:
    tasks = [(f"sums/{r}", _sum_case(r, w, opt)) for r, w in SUM_CASES]
    tasks.append(("sums/random", _random_sums(opt)))
    return tasks


# -- weights ---------------------------------------------------------------------------------------------------------


@dataclass
class WeightGrid:
    """Parameter grid of the weight suite; the defaults are the acceptance grid."""

    rr1_c: tuple = (2, 5, 6, 7)
    rr1_d: tuple = (5, 6, 7)
    rr1_q: tuple = (2, 4, 8)
    n10_sizes: tuple = (2, 3, 4, 5, 6, 7)
    n10_q: tuple = (2, 3, 4)
    n16_n: tuple = (2, 3, 4)
    n16_q: tuple = (2, 3, 4)
    p31_n: tuple = (1, 2, 3)
    p31_m: tuple = (2, 3, 4)
    cross_check: bool = True

    @classmethod
    def empty(cls) -> "WeightGrid":
        return cls((), (), (), (), (), (), (), (), (), False)


def _omega(w) -> list[int] | None:
    return list(w.omega) if w is not None else None


def _rr1_records(grid: WeightGrid) -> list[dict]:
    out = []
    cases = [("C", n) for n in grid.rr1_c] + [("D", n) for n in grid.rr1_d]
    for t, n in cases:
        for q in grid.rr1_q:
            if (t, n, q) == ("C", 2, 2):
                continue
            key = f"{t}{n}/q{q}"
            radical = W.is_radical(W.RootSystem(t, n).sigma(q))
            mult = W.aa1_check(t, n, q)
            aa1 = all(m is not None for m in mult.values())
            if radical:
                out.append(record(f"weights/rr1/{key}", "sigma_q is radical: dominance chain not claimed",
                                  False, None, type=t, n=n, q=q, radical=True))
                out.append(record(f"weights/aa1/{key}", "sigma_q radical: weight families reported, not asserted",
                                  False, None, type=t, n=n, q=q, radical=True, multiples=mult, holds=aa1))
                continue
            out.append(record(f"weights/rr1/{key}", "sigma_q > (q+1)w1 > (q-1)w1+w2 > (q-1)w1", True,
                              W.rr1_chain(t, n, q), type=t, n=n, q=q, radical=False))
            out.append(record(f"weights/aa1/{key}", "m(q+1)w1, m(q-1)w1, m((q-1)w1+w2) are weights of the "
                              "sigma_q module", True, aa1, type=t, n=n, q=q, radical=False, multiples=mult))
    return out


def _n10_records(grid: WeightGrid) -> list[dict]:
    out = []
    for N in grid.n10_sizes:
        for pi in W.partitions(N):
            for i in range(1, N):
                induced = W.induced_char_value(i, pi, N)
                counts = {}
                for q in grid.n10_q:
                    c = W.n10_count(i, W.TorusLabel(pi, q))
                    counts[q] = c
                    out.append(record(f"weights/n10/N{N}/{'-'.join(map(str, pi))}/i{i}/q{q}",
                                      "trivially restricting conjugates of (q-1)w_i = induced character value",
                                      True, c == induced, type="A", n=N - 1, q=q, i=i, partition=list(pi),
                                      count=c, induced=induced))
                if counts:
                    out.append(record(f"weights/n10/N{N}/{'-'.join(map(str, pi))}/i{i}/q-independent",
                                      "the count does not depend on q", True, len(set(counts.values())) == 1,
                                      type="A", n=N - 1, i=i, partition=list(pi),
                                      counts={str(k): v for k, v in counts.items()}))
    return out


def _n16_records(grid: WeightGrid) -> list[dict]:
    out = []
    for n in grid.n16_n:
        for q in grid.n16_q:
            for pi in W.partitions(n + 1):
                for i in range(1, n + 1):
                    r = W.n16_check(n, q, i, W.TorusLabel(pi, q))
                    out.append(record(f"weights/n16/A{n}/q{q}/{'-'.join(map(str, pi))}/i{i}",
                                      "a conjugate of kappa_i or lambda_i is trivial on the torus", True, r.holds,
                                      type="A", n=n, q=q, i=i, partition=list(pi), witness=_omega(r.witness),
                                      orbit=r.source or None))
    return out


def _p31_records(grid: WeightGrid) -> list[dict]:
    out = []
    for n in grid.p31_n:
        for m in grid.p31_m:
            for i in range(1, n + 1):
                rid = f"weights/p31/A{n}/m{m}/i{i}"
                try:
                    r = W.p31_check(n, m, i)
                except W.CoprimalityViolated as e:
                    out.append(record(rid, "coprimality condition fails", False, None, reason=str(e)))
                    continue
                out.append(record(rid, "a conjugate of w1 + (m-1)w_i + w_n is trivial on t_m", True, r.holds,
                                  type="A", n=n, m=m, i=i, witness=_omega(r.witness)))
    return out


def weight_records(grid: WeightGrid) -> list[dict]:
    return _rr1_records(grid) + _n10_records(grid) + _n16_records(grid) + _p31_records(grid)


def steinberg_cross_check(opt: Options) -> dict:
    """The torus witness for (n, q, pi) = (2, 2, [3]) against the order-7 element of SL_3(2) on its
    8-dim Steinberg (adjoint) module."""
    r = W.n16_check(2, 2, 1, W.TorusLabel((3,), 2))
    b = build("sl3_2")
    st = _store(b, opt)
    imgs = st.images(b.module.action)
    orders = st.element_orders()
    k = int(np.flatnonzero(orders == 7)[0])
    img = BitMatrix(imgs[k][:, None], b.module.dim)
    has_one = img.det_one_minus() == 0
    return record("weights/cross/sl3_2", "torus witness for pi=[3], q=2 agrees with eigenvalue 1 of an "
                  "order-7 element on the SL_3(2) Steinberg module", True, r.holds and has_one, "exhaustive",
                  witness=_omega(r.witness), element=element_text(st.element(k)), eigenvalue_one=has_one)


def _weight_tasks(opt: Options) -> list:
    grid = opt.grid if opt.grid is not None else WeightGrid()
    tasks = [("weights", lambda: weight_records(grid))]
    if grid.cross_check:
        tasks.append(("weights/cross", lambda: [steinberg_cross_check(opt)]))
    return tasks


_SUITE_TASKS = {
    "sp8": _sp8_tasks,
    "affine": _affine_tasks,
    "steinberg": _steinberg_tasks,
    "obstructions": _obstruction_tasks,
    "sums": _sum_tasks,
    "weights": _weight_tasks,
}

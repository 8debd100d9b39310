"""The classification pipeline behind the command line, with cached stages.

Every stage reads its result from the cache when present and otherwise
computes and writes it, so a rerun against a warm cache changes nothing.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from ..fermat.geometry import hermitian_points
from ..fermat.group import GROUP_ORDER, Group, build_group, frobenius_matrix, verify_group
from ..fermat.lines import H_F, NUM_LINES, RANK, build_configuration
from ..gf import field as F
from ..models.equivalence import NoQuadrupleError, aut_order, canonical_sextic
from ..models.involution import check_involution, nonprojective_involution
from ..models.model import ModelRecord, build_model
from ..models.sections import DEFAULT_MAX_D, TractabilityError
from ..nsengine.lattice import NSLattice, ade_type
from ..nsengine.orbits import OrbitRecord, galois_partners, orbit_decompose
from ..nsengine.spill import decompose_buckets, spill
from ..quadlat.hyperbolic import solve_fixed_norm
from .cache import Cache

EXAMPLE_LINE = ((1, F.gf(4, 4), 0), "-")
EXAMPLE_CLASS = (-4, -6, 3, 1, 1, 2, 1, -1, 2, 1, 1, 4, 1, 0, -3, 0, 2, -1, 3, -1, -2, -3)

# reference outcomes checked by ``classify``
EXPECTED = {
    "V": {4: 1_020_600, 5: 208_059_000},
    "orbits": {4: 8, 5: 312},
    "polarizations": {4: 7, 5: 224},
    "classes": {4: 6, 5: 65},
    "rt_d4": sorted(["0", "6A1", "6A1", "7A1", "8A1", "9A1", "10A1"]),
    "ball_total_d5": 146_945_851,
}
IN_MEMORY_MAX_DEGREE = 4


class ResourceGuard(RuntimeError):
    """A stage refused to run because of its time or memory cost."""


class AcceptanceMismatch(AssertionError):
    """A computed invariant differs from its reference value."""


@dataclass
class PipelineConfig:
    cache_dir: Path
    max_degree: int = 4
    degree5: str = "off"              # off | count-only | full
    threads: int = 1
    max_d: int = DEFAULT_MAX_D
    allow_full: bool = False

    def __post_init__(self):
        self.cache_dir = Path(self.cache_dir)
        if self.degree5 not in ("off", "count-only", "full"):
            raise ValueError(f"unknown degree-5 mode {self.degree5!r}")
        if self.degree5 == "full" and not self.allow_full:
            raise ResourceGuard("degree-5 full mode needs the explicit acknowledgment flag")
        if self.max_degree not in (2, 3, 4, 5):
            raise ValueError("max degree must lie in 2..5")


def _ints(row) -> str:
    return " ".join(str(int(x)) for x in row)


def _matrix_text(M) -> str:
    return "".join(_ints(r) + "\n" for r in M)


def _parse_matrix(text: str) -> np.ndarray:
    return np.array([[int(x) for x in line.split()] for line in text.splitlines() if line.strip()],
                    dtype=np.int64)


@dataclass
class ClassRow:
    name: str
    rt: str
    aut: int | None
    size: int
    sample: np.ndarray
    members: list[tuple[int, int]]     # (degree, orbit index)
    canonical: str

    def to_line(self) -> str:
        members = ",".join(f"{d}:{i}" for d, i in self.members)
        return f"{self.name} | {self.rt} | {self.aut} | {self.size} | {_ints(self.sample)} | {members} | {self.canonical}"

    @classmethod
    def from_line(cls, line: str) -> "ClassRow":
        name, rt, aut, size, sample, members, canon = (x.strip() for x in line.split("|"))
        mem = [tuple(int(y) for y in m.split(":")) for m in members.split(",") if m]
        return cls(name, rt, None if aut == "None" else int(aut), int(size),
                   np.array([int(x) for x in sample.split()], dtype=np.int64), mem, canon)


class Pipeline:
    def __init__(self, cfg: PipelineConfig, log=None):
        self.cfg = cfg
        self.cache = Cache(cfg.cache_dir)
        self.log = log or (lambda msg: print(msg, file=sys.stderr))

    # --- geometry ---------------------------------------------------------------------
    @cached_property
    def conf(self):
        return build_configuration("meet")

    @cached_property
    def ns(self) -> NSLattice:
        return NSLattice(self.conf.gram, H_F)

    @cached_property
    def group(self) -> Group:
        data = self.cache.read_arrays("group.npz")
        if data is not None:
            return Group(data["keys"], list(data["generators"]), self.conf)
        self.log("building Aut(X, h_F) by permutation closure")
        g = build_group(self.conf, verify=True)
        self.cache.write_arrays("group.npz", keys=g.keys, generators=np.array(g.generators))
        return g

    @cached_property
    def gamma(self) -> np.ndarray:
        text = self.cache.read_text("frobenius.txt")
        if text is not None:
            return _parse_matrix(text)
        G = frobenius_matrix(self.conf)
        self.cache.write_text("frobenius.txt", _matrix_text(G))
        return G

    def build_geometry(self) -> dict:
        conf = self.conf
        pts = hermitian_points()
        det = int(round(np.linalg.det(conf.gram.astype(float))))
        ex = conf.classes[conf.index_of(*EXAMPLE_LINE)]
        facts = {
            "hermitian_points": len(pts),
            "lines": len(conf.lines),
            "det": det,
            "example_class": tuple(int(x) for x in ex) == EXAMPLE_CLASS,
        }
        if (len(pts), len(conf.lines), det) != (126, NUM_LINES, -25) or not facts["example_class"]:
            raise AcceptanceMismatch(f"geometry check failed: {facts}")
        if self.cache.read_text("lines.txt") is None:
            body = "".join(
                f"{i + 1} {l.sign} {' '.join(F.to_str(c) for c in l.point)} | {l.g.to_str()} | {_ints(conf.classes[i])}\n"
                for i, l in enumerate(conf.lines))
            self.cache.write_text("lines.txt", body)
        if self.cache.read_text("gram.txt") is None:
            self.cache.write_text("gram.txt", _matrix_text(conf.gram))
        group = self.group
        if len(group) != GROUP_ORDER:
            raise AcceptanceMismatch(f"group order {len(group)}")
        verify_group(group)
        facts["group_order"] = len(group)
        facts["frobenius_involution"] = bool(np.array_equal(self.gamma @ self.gamma, np.eye(RANK, dtype=np.int64)))
        return facts

    # --- enumeration ------------------------------------------------------------------------
    def count(self, degree: int) -> int:
        name = f"enumerate-d{degree}.txt"
        text = self.cache.read_text(name)
        if text is not None:
            return int(text.split()[1])
        n = solve_fixed_norm(self.ns.lat, [(H_F, degree)], 2, mode="count").count
        self.cache.write_text(name, f"count {n}\n")
        return n

    def vectors(self, degree: int) -> np.ndarray:
        if degree > IN_MEMORY_MAX_DEGREE:
            raise ResourceGuard(f"degree {degree} vectors are only handled on disk (full mode)")
        return solve_fixed_norm(self.ns.lat, [(H_F, degree)], 2).vectors

    # --- orbits -------------------------------------------------------------------------------
    def _decompose(self, degree: int) -> list[OrbitRecord]:
        gens = self.group.generator_matrices()
        if degree <= IN_MEMORY_MAX_DEGREE:
            V = self.vectors(degree)
            if not len(V):
                return []
            orbs, labels, index = orbit_decompose(V, gens, GROUP_ORDER, self.ns.degree)
            galois_partners(orbs, V, labels, index, self.gamma)
            return orbs
        if self.cfg.degree5 != "full":
            raise ResourceGuard("degree-5 orbits need full mode with the acknowledgment flag")
        d = self.cache.path(f"spill-d{degree}")
        if not (d / "DONE").exists():
            self.log(f"spilling degree-{degree} vectors to {d}")
            chunks = solve_fixed_norm(self.ns.lat, [(H_F, degree)], 2, mode="chunks", prefix_len=2)
            spill(chunks, self.conf.gram @ self.conf.classes.T, d, nbuckets=256)
        return decompose_buckets(d, RANK, gens, GROUP_ORDER, self.gamma, self.ns.degree,
                                 progress=lambda k, n: self.log(f"bucket {k + 1}/{n}"))

    def _annotate(self, o: OrbitRecord) -> tuple[bool | None, str]:
        """Fill polarization data; returns (Exc u Lin spans NS, failure)."""
        ns = self.ns
        nef, witness = ns.is_nef(o.representative)
        if not nef:
            o.is_polarization, o.failure = False, "not-nef"
            return None, "not-nef"
        if ns.isotropic_unit(o.representative) is not None:
            o.is_polarization, o.failure = False, "fixed-component"
            return None, "fixed-component"
        o.is_polarization = True
        exc = ns.exc_set(o.representative)
        o.rt = str(ade_type(exc, self.conf.gram))
        lin = ns.lin_set(o.representative, exc)
        rows = np.vstack([exc, lin]) if len(exc) else lin
        return ns.spans_lattice(rows), "-"

    def orbits(self, degree: int) -> list[OrbitRecord]:
        name = f"orbits-d{degree}.txt"
        text = self.cache.read_text(name)
        if text is not None:
            return [self._parse_orbit(line) for line in text.splitlines() if line.strip()]
        self.log(f"orbit decomposition at degree {degree}")
        orbs = self._decompose(degree)
        lines = []
        for o in orbs:
            spans, failure = self._annotate(o)
            lines.append(f"{_ints(o.representative)} | {o.size} {o.stabilizer_order} "
                         f"{int(bool(o.is_polarization))} {o.rt or '-'} {o.galois_partner} "
                         f"{'-' if spans is None else int(spans)} {failure}\n")
        self.cache.write_text(name, "".join(lines))
        return orbs

    def _parse_orbit(self, line: str) -> OrbitRecord:
        rep, rest = line.split("|")
        size, stab, pol, rt, partner, _spans, failure = rest.split()
        rep = np.array([int(x) for x in rep.split()], dtype=np.int64)
        o = OrbitRecord(rep, int(size), int(stab), self.ns.degree(rep))
        o.is_polarization = pol == "1"
        o.rt = None if rt == "-" else rt
        o.galois_partner = int(partner)
        o.failure = None if failure == "-" else failure
        return o

    def spans_flags(self, degree: int) -> list[bool | None]:
        self.orbits(degree)
        out = []
        for line in self.cache.read_text(f"orbits-d{degree}.txt").splitlines():
            s = line.split("|")[1].split()[5]
            out.append(None if s == "-" else s == "1")
        return out

    # --- models ----------------------------------------------------------------------------------
    def model(self, degree: int, index: int, h=None) -> ModelRecord:
        name = f"models-d{degree}/orbit-{index:03d}.txt"
        text = self.cache.read_text(name)
        if text is not None:
            return ModelRecord.from_text(text)
        if h is None:
            h = self.orbits(degree)[index].representative
        rec = self.compute_model(h)
        self.cache.write_text(name, rec.to_text())
        return rec

    def compute_model(self, h) -> ModelRecord:
        rec = build_model(h, self.conf, verify_dims=True, max_d=self.cfg.max_d)
        try:
            rec.canonical = canonical_sextic(rec.sextic, rec.singular_points).form
        except NoQuadrupleError:
            return rec
        try:
            rec.aut_order = aut_order(rec.sextic, rec.singular_points)
        except NoQuadrupleError:
            # smooth Hermitian sextic: projectively the Fermat curve, whose
            # automorphisms are PGU_3 = Aut(X, h_F) modulo the deck involution
            rec.aut_order = len(self.group) // 2
        return rec

    # --- classification -----------------------------------------------------------------------
    def degrees(self) -> list[int]:
        top = self.cfg.max_degree
        if top == 5 and self.cfg.degree5 != "full":
            top = 4
        return list(range(2, top + 1))

    def classify(self) -> dict:
        summary: dict = {"skipped_models": []}
        if self.cfg.max_degree == 5 and self.cfg.degree5 == "count-only":
            summary["V5"] = self.count(5)
        for degree in self.degrees():
            orbs = self.orbits(degree)
            summary[f"orbits_d{degree}"] = len(orbs)
            summary[f"polarizations_d{degree}"] = sum(bool(o.is_polarization) for o in orbs)
            summary[f"spans_d{degree}"] = all(s for s, o in zip(self.spans_flags(degree), orbs)
                                              if o.is_polarization)
            for i, o in enumerate(orbs):
                if not o.is_polarization:
                    continue
                try:
                    self.model(degree, i, o.representative)
                except TractabilityError as exc:
                    summary["skipped_models"].append((degree, i, str(exc)))
        rows = self._class_rows()
        body = "".join(r.to_line() + "\n" for r in rows)
        self.cache.write_text(f"classes-d{self.degrees()[-1]}.txt", body)
        summary["classes"] = len(rows)
        summary["ball_total"] = sum(r.size for r in rows)
        self._check(summary)
        if summary["skipped_models"]:
            raise ResourceGuard(f"{len(summary['skipped_models'])} models exceed the tractability bound")
        return summary

    def _class_rows(self) -> list[ClassRow]:
        groups: dict = {}
        for degree in self.degrees():
            for i, o in enumerate(self.orbits(degree)):
                if not o.is_polarization:
                    continue
                name = f"models-d{degree}/orbit-{i:03d}.txt"
                if self.cache.read_text(name) is None:
                    continue
                rec = self.model(degree, i)
                key = rec.canonical.coeffs if rec.canonical is not None else ("sextic",) + rec.sextic.coeffs
                groups.setdefault(key, []).append((degree, i, o, rec))
        rows = []
        for k, members in enumerate(groups.values()):
            d0, i0, o0, rec0 = members[0]
            canon = str(rec0.canonical) if rec0.canonical is not None else str(rec0.sextic)
            rows.append(ClassRow(f"C{k}", rec0.rt, rec0.aut_order, sum(o.size for _, _, o, _ in members),
                                 o0.representative, [(d, i) for d, i, _, _ in members], canon))
        return rows

    def _check(self, s: dict) -> None:
        bad = []
        top = self.degrees()[-1]
        for degree in self.degrees():
            if degree in EXPECTED["orbits"]:
                if s[f"orbits_d{degree}"] != EXPECTED["orbits"][degree]:
                    bad.append(f"orbits at degree {degree}")
                if s[f"polarizations_d{degree}"] != EXPECTED["polarizations"][degree]:
                    bad.append(f"polarizations at degree {degree}")
            if not s[f"spans_d{degree}"]:
                bad.append(f"Exc u Lin does not span NS at degree {degree}")
        if top in EXPECTED["classes"] and not s["skipped_models"] and s["classes"] != EXPECTED["classes"][top]:
            bad.append(f"{s['classes']} classes up to degree {top}")
        if top == 4:
            rts = sorted(o.rt for o in self.orbits(4) if o.is_polarization)
            if rts != EXPECTED["rt_d4"]:
                bad.append(f"RT multiset {rts}")
        if top == 5 and not s["skipped_models"] and s["ball_total"] != EXPECTED["ball_total_d5"]:
            bad.append(f"ball total {s['ball_total']}")
        if "V5" in s and s["V5"] != EXPECTED["V"][5]:
            bad.append(f"|V5| = {s['V5']}")
        if bad:
            raise AcceptanceMismatch("; ".join(bad))

    def class_rows(self) -> list[ClassRow]:
        text = None
        for degree in (5, 4, 3, 2):
            text = self.cache.read_text(f"classes-d{degree}.txt")
            if text is not None:
                break
        if text is None:
            raise FileNotFoundError("no class table in the cache; run classify first")
        return [ClassRow.from_line(line) for line in text.splitlines() if line.strip()]

    # --- involution -----------------------------------------------------------------------------
    def involution(self) -> np.ndarray:
        """The matrix G of the involution; re-checked when read from the cache."""
        text = self.cache.read_text("involution.txt")
        if text is not None:
            G = _parse_matrix(text.split("G\n", 1)[1])
            check_involution(G, self.group)
            return G
        rows = self.class_rows()
        fermat = next((r for r in rows if (2, 0) in r.members), None)
        member = next(((d, i) for d, i in fermat.members if d == 4), None) if fermat else None
        if member is None:
            raise FileNotFoundError("degree-4 member of the Fermat class missing; run classify first")
        rec = self.model(*member)
        res = nonprojective_involution(rec, self.group)
        self.cache.write_text("involution.txt", res.to_text())
        return res.G


def render_table(rows: list[ClassRow]) -> str:
    out = [f"{'class':<6} {'RT':<8} {'|aut|':>7} {'N':>10}  sample h / canonical sextic"]
    for r in rows:
        out.append(f"{r.name:<6} {r.rt:<8} {str(r.aut):>7} {r.size:>10}  [{', '.join(str(int(x)) for x in r.sample)}]")
        out.append(f"{'':<35}{r.canonical}")
    out.append(f"total N = {sum(r.size for r in rows)}")
    return "\n".join(out) + "\n"

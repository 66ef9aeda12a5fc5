"""Classification of algebra censuses up to isomorphism or isotopism.

Graph invariants only ever split: algebras whose graphs (G1 for isotopism, G2
for isomorphism) have different signatures or canonical certificates cannot be
equivalent. Every merge is decided by an exact engine and stored with a
verified witness, so the classes are exactly the equivalence classes whenever
no pair is left undecided.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import linalg, oracle
from .algebra import Algebra, IsotopismTriple, describe, verify_isotopism
from .colorgraph import BudgetExceeded, canonical_certificate, signature
from .functor import build_graph
from .groebner import GroebnerBudgetExceeded, extract_witness, isomorphism_ideal, isotopism_ideal
from .latin import format_pls, pls_isotopism_classes, ring_of

RELATIONS = ("isomorphism", "isotopism")
ENGINES = ("auto", "oracle", "groebner")
# canonical labeling is skipped above this order: exact checks are cheaper there
CERTIFICATE_MAX_ORDER = 256


@dataclass(frozen=True)
class Merge:
    """``witness`` is an equivalence from ``census[source]`` to ``census[target]``."""

    source: int
    target: int
    witness: IsotopismTriple
    engine: str


@dataclass
class PipelineStats:
    pairs_total: int = 0
    pruned_by_signature: int = 0
    decided_by_certificate: int = 0
    exact_calls: int = 0
    exact_positive: int = 0
    exact_negative: int = 0
    undecided: int = 0
    certificates: int = 0
    seconds: float = 0.0

    def merge(self, other: "PipelineStats") -> None:
        for name in ("decided_by_certificate", "exact_calls", "exact_positive", "exact_negative",
                     "undecided", "certificates"):
            setattr(self, name, getattr(self, name) + getattr(other, name))

    @property
    def pruned_fraction(self) -> float:
        if not self.pairs_total:
            return 0.0
        return 1 - self.exact_calls / self.pairs_total

    def to_json(self) -> dict:
        out = dict(self.__dict__)
        out["seconds"] = round(self.seconds, 3)
        return out


@dataclass(frozen=True)
class ClassInfo:
    representative: int
    members: tuple[int, ...]


@dataclass
class ClassificationReport:
    relation: str
    census_size: int
    classes: list[ClassInfo]
    stats: PipelineStats
    merges: list[Merge]
    undecided: list[tuple[int, int]]
    census: list[Algebra] = field(repr=False, default_factory=list)
    labels: list[str] | None = None
    invariant_groups: int = 0

    @property
    def exact(self) -> bool:
        return not self.undecided

    def __len__(self) -> int:
        return len(self.classes)

    def class_of(self, i: int) -> int:
        for k, c in enumerate(self.classes):
            if i in c.members:
                return k
        raise IndexError(i)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else self.census[i].key()

    def merged_label_pairs(self) -> list[tuple[str, str]]:
        """Pairs of census labels that ended up in one class."""
        out = []
        for c in self.classes:
            names = sorted(self.label(i) for i in c.members)
            out += [(a, b) for k, a in enumerate(names) for b in names[k + 1:]]
        return sorted(out)

    def verify(self) -> bool:
        """Re-check every stored witness."""
        return all(verify_isotopism(self.census[m.source], self.census[m.target], m.witness)
                   and (self.relation == "isotopism" or m.witness.is_isomorphism)
                   for m in self.merges)

    def to_json(self) -> dict:
        return {
            "relation": self.relation,
            "census_size": self.census_size,
            "class_count": len(self.classes),
            "exact": self.exact,
            "invariant_groups": self.invariant_groups,
            "classes": [
                {"representative": self.label(c.representative), "members": [self.label(i) for i in c.members]}
                for c in self.classes
            ],
            "merges": [
                {"source": self.label(m.source), "target": self.label(m.target), "engine": m.engine,
                 "witness": m.witness.to_json()}
                for m in self.merges
            ],
            "undecided": [[self.label(a), self.label(b)] for a, b in self.undecided],
            "stats": self.stats.to_json(),
        }


# --- exact decisions --------------------------------------------------------------


def choose_engine(engine: str, relation: str, A: Algebra) -> str:
    """Resolve ``auto``: exhaustive search whenever it fits the oracle budget."""
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; expected one of {ENGINES}")
    if engine != "auto":
        return engine
    size = linalg.gl_order(A.n, A.p)
    if relation == "isomorphism" and size > oracle.pair_budget():
        return "groebner"
    return "oracle"


def exact_equivalence(A: Algebra, B: Algebra, relation: str, engine: str = "auto",
                      budget: int | None = None) -> IsotopismTriple | None:
    """A verified witness ``A -> B`` or None; raises ``oracle.Undecided`` on budget exhaustion."""
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}; expected one of {RELATIONS}")
    used = choose_engine(engine, relation, A)
    try:
        if used == "oracle":
            if relation == "isomorphism":
                f = oracle.find_isomorphism(A, B)
                w = None if f is None else IsotopismTriple.diagonal(f)
            else:
                w = oracle.find_isotopism(A, B)
        else:
            builder = isomorphism_ideal if relation == "isomorphism" else isotopism_ideal
            w = extract_witness(builder(A, B), budget)
            if w is not None and relation == "isomorphism":
                w = IsotopismTriple.diagonal(w)
    except GroebnerBudgetExceeded as exc:
        raise oracle.Undecided(str(exc)) from exc
    if w is not None and not verify_isotopism(A, B, w):
        raise RuntimeError(f"{used} engine returned an invalid witness")
    return w


# --- classification -----------------------------------------------------------------


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _use_certificates(mode: str, graphs_order: int) -> bool:
    if mode == "auto":
        return graphs_order <= CERTIFICATE_MAX_ORDER
    return mode in ("always", True)


def _classify_bucket(algebras: list[Algebra], relation: str, engine: str, certificates: bool,
                     budget: int | None):
    """Greedy classification of one signature bucket (local indices)."""
    stats = PipelineStats()
    which = "g1" if relation == "isotopism" else "g2"
    reps: list[int] = []
    merges: list[tuple[int, int, IsotopismTriple, str]] = []
    undecided: list[tuple[int, int]] = []
    certs: dict[int, bytes | None] = {}
    used = choose_engine(engine, relation, algebras[0]) if algebras else engine

    def cert(i: int) -> bytes | None:
        if i not in certs:
            certs[i] = None
            if certificates:
                try:
                    certs[i] = canonical_certificate(build_graph(algebras[i], which))
                    stats.certificates += 1
                except BudgetExceeded:
                    pass
        return certs[i]

    for i in range(len(algebras)):
        home = None
        if reps:
            mine = cert(i)
            for r in reps:
                rc = cert(r)
                if mine is not None and rc is not None and mine != rc:
                    stats.decided_by_certificate += 1
                    continue
                stats.exact_calls += 1
                try:
                    w = exact_equivalence(algebras[r], algebras[i], relation, engine, budget)
                except oracle.Undecided:
                    stats.undecided += 1
                    undecided.append((r, i))
                    continue
                if w is None:
                    stats.exact_negative += 1
                    continue
                stats.exact_positive += 1
                merges.append((r, i, w, used))
                home = r
                break
        if home is None:
            reps.append(i)
    return merges, undecided, stats


def classify(census: list[Algebra], relation: str, engine: str = "auto", invariants: bool = True,
             certificates: str = "auto", jobs: int = 1, budget: int | None = None,
             labels: list[str] | None = None, seed: "ClassificationReport | None" = None) -> ClassificationReport:
    """Partition ``census`` into exact equivalence classes.

    ``invariants=False`` is the unfiltered baseline (every comparison goes to
    the exact engine). ``seed`` is a finer classification of the same census
    (e.g. by isomorphism when classifying by isotopism): its classes are
    merged up front and only their representatives are compared.
    """
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}; expected one of {RELATIONS}")
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; expected one of {ENGINES}")
    start = time.perf_counter()
    census = list(census)
    N = len(census)
    if N and any((A.p, A.n) != (census[0].p, census[0].n) for A in census):
        raise ValueError("census mixes fields or dimensions")
    stats = PipelineStats(pairs_total=N * (N - 1) // 2)
    dsu = _DSU(N)
    merges: list[Merge] = []

    if seed is not None:
        if seed.census_size != N:
            raise ValueError("seed classification is for a different census")
        for m in seed.merges:
            dsu.union(m.source, m.target)
            merges.append(m)
        active = [c.representative for c in seed.classes]
    else:
        active = list(range(N))

    which = "g1" if relation == "isotopism" else "g2"
    buckets: dict = {}
    for i in active:
        key = signature(build_graph(census[i], which)) if invariants else None
        buckets.setdefault(key, []).append(i)
    bucket_list = list(buckets.values())
    if seed is None:
        sizes = {k: len(v) for k, v in enumerate(bucket_list)}
    else:
        member_count = {c.representative: len(c.members) for c in seed.classes}
        sizes = {k: sum(member_count[i] for i in v) for k, v in enumerate(bucket_list)}
    stats.pruned_by_signature = stats.pairs_total - sum(s * (s - 1) // 2 for s in sizes.values())

    # every member of a bucket has the same graph order
    use_cert = [invariants and key is not None and _use_certificates(certificates, sum(n for _, n in key.color_counts))
                for key in buckets]
    jobs_args = [([census[i] for i in b], relation, engine, u, budget) for b, u in zip(bucket_list, use_cert)]
    if jobs > 1 and len(bucket_list) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_classify_bucket, *zip(*jobs_args)))
    else:
        results = [_classify_bucket(*a) for a in jobs_args]

    undecided: list[tuple[int, int]] = []
    for b, (local_merges, local_undecided, bstats) in zip(bucket_list, results):
        stats.merge(bstats)
        for r, i, w, used in local_merges:
            dsu.union(b[r], b[i])
            merges.append(Merge(b[r], b[i], w, used))
        undecided += [(b[r], b[i]) for r, i in local_undecided]

    members: dict[int, list[int]] = {}
    for i in range(N):
        members.setdefault(dsu.find(i), []).append(i)
    classes = []
    for ms in members.values():
        rep = min(ms, key=lambda i: (census[i].key(), i))
        classes.append(ClassInfo(rep, tuple(ms)))
    classes.sort(key=lambda c: (census[c.representative].key(), c.representative))
    merges.sort(key=lambda m: (m.target, m.source))
    stats.seconds = time.perf_counter() - start
    return ClassificationReport(relation, N, classes, stats, merges, sorted(undecided), census, labels,
                                invariant_groups=len(buckets) if invariants else 0)


# --- named censuses ----------------------------------------------------------------


def classify_quasigroup_rings(n: int, p: int, engine: str = "auto", invariants: bool = True,
                              jobs: int = 1, label_style: str = "canonical") -> ClassificationReport:
    """Isotopism classes of the rings of one representative per PLS isotopy class.

    ``report.merged_label_pairs()`` lists the distinct PLS classes whose rings
    turned out isotopic. ``label_style="table"`` names order-3 classes by the
    square used for them in the stored P3 invariant table.
    """
    squares = pls_isotopism_classes(n)
    census = [ring_of(L, p) for L in squares]
    labels = [format_pls(L) for L in squares]
    if label_style == "table" and n == 3:
        from .tables import p3_table_labels

        names = p3_table_labels()
        labels = [names.get(x, x) for x in labels]
    elif label_style not in ("canonical", "table"):
        raise ValueError(f"unknown label style {label_style!r}")
    return classify(census, "isotopism", engine, invariants, jobs=jobs, labels=labels)


def classify_lie(n: int, p: int, relation: str = "isomorphism", engine: str = "auto",
                 jobs: int = 1, iso: ClassificationReport | None = None) -> ClassificationReport:
    """Classify the Lie census on F_p^n.

    Isotopism classes are computed on top of the isomorphism classes (an
    isomorphism is an isotopism), so only class representatives meet the
    isotopism engine. A previous isomorphism report may be passed as ``iso``.
    """
    if iso is None:
        census = oracle.enumerate_lie_algebras(n, p)
        labels = [describe(A) for A in census]
        iso = classify(census, "isomorphism", engine, jobs=jobs, labels=labels)
    else:
        census, labels = iso.census, iso.labels
    if relation == "isomorphism":
        return iso
    report = classify(census, "isotopism", engine, jobs=jobs, labels=labels, seed=iso)
    # invariant groups counted over the whole census, not just the seed representatives
    report.invariant_groups = len({signature(build_graph(census[c.representative], "g1")) for c in iso.classes})
    return report


def filter_effect(n: int = 3, p: int = 2, engine: str = "auto") -> dict:
    """Exact-engine calls and wall clock with and without invariant filtering."""
    with_f = classify_quasigroup_rings(n, p, engine, invariants=True)
    without = classify_quasigroup_rings(n, p, engine, invariants=False)
    return {
        "classes": (len(with_f), len(without)),
        "pairs": with_f.stats.pairs_total,
        "exact_calls": (with_f.stats.exact_calls, without.stats.exact_calls),
        "call_ratio": without.stats.exact_calls / max(1, with_f.stats.exact_calls),
        "pruned_fraction": with_f.stats.pruned_fraction,
        "seconds": (with_f.stats.seconds, without.stats.seconds),
        "time_ratio": without.stats.seconds / max(1e-9, with_f.stats.seconds),
        "same_partition": [c.members for c in with_f.classes] == [c.members for c in without.classes],
    }

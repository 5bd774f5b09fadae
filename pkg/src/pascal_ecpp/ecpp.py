"""Atkin-Morain downrun over a graph of intermediate probable primes.

Each node of the graph holds a probable prime s.  Expanding a node walks
the discriminant table (up to the node's current |D| budget), solves
Cornacchia's equation for each usable D, and keeps every order
m = s + 1 +- u that splits as (B-smooth f) * (probable prime s') with s'
large enough.  Each such s' becomes a child node.  The curve for an edge is
only built (Hilbert root, CM curve and twist, random point) once its child
is selected, so discarded branches never pay for root finding.

Node selection is by :func:`priority`; a node whose budget produces no
child gets its budget multiplied and is put back in the queue.
"""

from __future__ import annotations

import heapq
import itertools
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .certificate import Certificate, CertStep
from .cm import (
    DEFAULT_S_LIMIT,
    DiscriminantCursor,
    DiscriminantRecord,
    DiscriminantTable,
    curve_pair,
    hilbert_root,
    load_table,
)
from .ecurve import proof_step
from .errors import CompositeModulus, DegenerateJ, NoRoot, NoSolution, RetryLimit, Stuck, TableExhausted
from .numtheory import (
    FactoredInteger,
    SqrtCache,
    bounded_factor,
    cornacchia,
    exceeds_size_bound,
    is_prime_trial,
    is_probable_prime,
)

log = logging.getLogger(__name__)


class Exhausted(LookupError):
    """No child was found within the node's current discriminant budget."""


class CompositeDetected(CompositeModulus):
    pass


@dataclass
class ProofConfig:
    smooth_bound: int | None = None  # None: max(10^4, 50 * digits(s))
    d_max: int = 10**5
    s_limit: int = DEFAULT_S_LIMIT
    small_prime_threshold: int = 10**9
    initial_d_limit: int = 5000
    d_growth: int = 4
    max_candidates: int = 8
    effort: int = 0
    prp_bases: int = 20
    seed: int = 0
    jobs: int = 1
    strategy: str = "graph"  # "fixed" is the small-fixed-set baseline
    fixed_set_limit: int = 1000
    table_path: str | None = None

    def __post_init__(self):
        if self.small_prime_threshold < 2**20:
            raise ValueError("small_prime_threshold must be at least 2^20")
        if self.smooth_bound is not None and self.smooth_bound < 2:
            raise ValueError("smooth bound must be at least 2")
        if self.strategy not in ("graph", "fixed"):
            raise ValueError(f"unknown strategy {self.strategy!r}")

    def bound_for(self, s: int) -> int:
        if self.smooth_bound is not None:
            return self.smooth_bound
        return max(10**4, 50 * len(str(s)))


@dataclass(frozen=True)
class Candidate:
    """A possible edge s -> child: order m = f * child over Z/sZ."""

    record: DiscriminantRecord
    u: int
    m: int
    f: FactoredInteger
    child: int


@dataclass(eq=False)
class GraphNode:
    id: int
    s: int
    depth: int
    d_limit: int
    parent: GraphNode | None = None
    edge: Candidate | None = None
    step: CertStep | None = None
    effort: int = 0
    dead: bool = False
    version: int = 0
    cursor: DiscriminantCursor | None = field(default=None, repr=False)
    cache: SqrtCache | None = field(default=None, repr=False)

    def alive(self) -> bool:
        node = self
        while node is not None:
            if node.dead:
                return False
            node = node.parent
        return True


def priority(node: GraphNode) -> tuple[int, int, int]:
    """Smaller sorts first: fewer digits, then smaller |D| budget, then age."""
    return len(str(node.s)), node.d_limit, node.id


def _examine(s: int, record: DiscriminantRecord, u: int, bound: int,
             effort: int) -> list[Candidate]:
    out = []
    for m in (s + 1 + u, s + 1 - u):
        fi = bounded_factor(m, bound, effort)
        if fi.cofactor_is_prp and fi.cofactor > 1 and fi.factors \
                and exceeds_size_bound(fi.cofactor, s):
            f = FactoredInteger(fi.smooth_part, fi.factors)
            out.append(Candidate(record, u, m, f, fi.cofactor))
    return out


def _examine_batch(args):
    s, batch, bound, effort = args
    out = []
    for record, u in batch:
        out.extend(_examine(s, record, u, bound, effort))
    return out


def atkin_step(node: GraphNode, cfg: ProofConfig, table: DiscriminantTable,
               pool: ProcessPoolExecutor | None = None) -> list[Candidate]:
    """Collect up to ``cfg.max_candidates`` child candidates for ``node``."""
    s = node.s
    if s <= cfg.small_prime_threshold:
        raise ValueError("atkin_step called on a node below the trial-division threshold")
    if node.cursor is None:
        node.cursor = DiscriminantCursor(table, s)
        node.cache = SqrtCache(s)
    bound = cfg.bound_for(s)
    wanted = 1 if cfg.strategy == "fixed" else cfg.max_candidates
    found: list[Candidate] = []
    tried = []
    while len(found) < wanted:
        solved = []
        # solve a batch of discriminants, then factor their orders
        while len(solved) < max(cfg.jobs, 1) * 4:
            record = node.cursor.next(node.d_limit)
            if record is None:
                break
            tried.append(record.D)
            try:
                u, _ = cornacchia(record.D, s, node.cache, list(record.abs_factors))
            except NoSolution:
                continue
            solved.append((record, u))
        if not solved:
            break
        if pool is not None:
            chunks = [(s, solved[k::cfg.jobs], bound, node.effort) for k in range(cfg.jobs)]
            results = list(pool.map(_examine_batch, chunks))
            # restore table order so the outcome does not depend on jobs
            order = {rec.D: k for k, (rec, _) in enumerate(solved)}
            batch = sorted(itertools.chain.from_iterable(results),
                           key=lambda c: (order[c.record.D], c.m))
        else:
            batch = _examine_batch((s, solved, bound, node.effort))
            batch.sort(key=lambda c: (-c.record.D, c.m))
        found.extend(batch)
    found = found[:wanted] if cfg.strategy == "fixed" else found
    log.info("node=%d digits=%d D=%s..%s outcome=%s", node.id, len(str(s)),
             tried[0] if tried else "-", tried[-1] if tried else "-",
             f"{len(found)} candidates" if found else "exhausted")
    if not found:
        raise Exhausted(f"no candidate for node {node.id} with |D| <= {node.d_limit}")
    return found


def build_curves_and_prove(edge: Candidate, s_parent: int, rng: random.Random,
                           index: int = 0) -> CertStep | None:
    """Construct the CM curve pair for ``edge`` and find a witness point.

    Returns None when neither the curve nor its twist shows the order m
    (the candidate is abandoned); compositeness of ``s_parent`` propagates
    as :class:`CompositeModulus`.
    """
    x0 = hilbert_root(s_parent, edge.record, rng)
    try:
        pair = curve_pair(s_parent, x0, edge.u, rng)
    except DegenerateJ:
        return None
    f_value = edge.f.value
    for E in (pair.curve, pair.twist):
        try:
            P = proof_step(E, edge.m, f_value, rng)
        except RetryLimit:
            P = None
        if P is not None:
            return CertStep.from_factored(index, edge.child, E.a, E.b, P, edge.f)
    return None


def _trial_certificate(n: int) -> Certificate:
    if not is_prime_trial(n):
        raise CompositeDetected(n, _small_factor(n), "trial division")
    return Certificate(n, [])


def _small_factor(n: int) -> int | None:
    if n < 4:
        return None
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return None


def prove(n: int, cfg: ProofConfig | None = None, table: DiscriminantTable | None = None,
          stats: dict | None = None) -> Certificate:
    """Prove a probable prime n prime; return its certificate.

    Numbers at or below the threshold get an empty certificate (trial
    division suffices).  Raises :class:`CompositeDetected` for composite n
    and :class:`Stuck` when every node ran out of discriminants.
    """
    cfg = cfg or ProofConfig()
    if n < 2:
        raise CompositeDetected(n, None, "not >= 2")
    if n <= cfg.small_prime_threshold:
        return _trial_certificate(n)
    if not is_probable_prime(n, cfg.prp_bases):
        raise CompositeDetected(n, None, "failed Miller-Rabin")
    if table is None:
        table = load_table(cfg.table_path, cfg.s_limit, cfg.d_max)
    rng = random.Random(cfg.seed)
    counter = itertools.count()
    first_limit = cfg.fixed_set_limit if cfg.strategy == "fixed" else cfg.initial_d_limit
    root = GraphNode(next(counter), n, 0, min(first_limit, cfg.d_max), effort=cfg.effort)
    heap: list = []

    def push(node: GraphNode):
        node.version += 1
        heapq.heappush(heap, (priority(node), node.version, node))

    push(root)
    if stats is not None:
        stats.update(nodes=1, expansions=0, abandoned=0)
    pool = ProcessPoolExecutor(cfg.jobs) if cfg.jobs > 1 else None
    try:
        while heap:
            _, version, node = heapq.heappop(heap)
            if version != node.version or not node.alive():
                continue
            if node.parent is not None and node.step is None:
                try:
                    node.step = build_curves_and_prove(node.edge, node.parent.s, rng)
                except (CompositeModulus, NoRoot) as exc:
                    if node.parent is root:
                        raise CompositeDetected(n, getattr(exc, "witness", None), str(exc)) from exc
                    log.info("node=%d composite parent dropped: %s", node.parent.id, exc)
                    node.parent.dead = True
                    continue
                if node.step is None:
                    if stats is not None:
                        stats["abandoned"] += 1
                    continue
            if node.s <= cfg.small_prime_threshold:
                if is_prime_trial(node.s):
                    return _assemble(n, node)
                node.dead = True
                continue
            try:
                children = atkin_step(node, cfg, table, pool)
            except Exhausted:
                if cfg.strategy == "fixed":
                    if node.effort >= 2:
                        node.dead = True
                    else:
                        node.effort += 1
                        node.cursor = None
                        push(node)
                    continue
                if node.d_limit >= cfg.d_max:
                    node.dead = True
                    continue
                node.d_limit = min(node.d_limit * cfg.d_growth, cfg.d_max)
                push(node)
                continue
            except TableExhausted:
                node.dead = True
                continue
            except CompositeModulus as exc:
                if node is root:
                    raise CompositeDetected(n, exc.witness, str(exc)) from exc
                node.dead = True
                continue
            if stats is not None:
                stats["expansions"] += 1
                stats["nodes"] += len(children)
            for c in children:
                push(GraphNode(next(counter), c.child, node.depth + 1,
                               min(first_limit, cfg.d_max), node, c, effort=cfg.effort))
            push(node)
    finally:
        if pool is not None:
            pool.shutdown()
    raise Stuck(f"all nodes exhausted at |D| <= {cfg.d_max}")


def _assemble(n: int, leaf: GraphNode) -> Certificate:
    path = []
    node = leaf
    while node.parent is not None:
        path.append(node.step)
        node = node.parent
    steps = [CertStep(i, st.s, st.a, st.b, st.x, st.y, st.f) for i, st in enumerate(path, start=1)]
    return Certificate(n, steps)

"""Retweet cascade reconstruction and diffusion metrics.

Cascades are built from retweet edges only (replies/quotes/mentions never
enter the edgelist). Each cascade is the tree of records transitively
retweeting one root, discovered by breadth-first search with children
visited in (created_at, tweet_id) order so results are reproducible and
independent of input permutation or worker count.

Edges whose parent never made it into the corpus are dropped with a count:
keyword-sampled collections are full of such holes and guessing a parent
would fabricate structure. Children timestamped before their parent are kept
but flagged, since export clock skew is common and the metrics stay
computable.
"""

from __future__ import annotations

import json
import math
from collections import Counter, deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from statistics import median
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from .errors import EdgelistError
from .ingest import RefKind, TweetRecord

MS_PER_MINUTE = 60000.0


class Edge(NamedTuple):
    child_id: str
    parent_id: str


class CascadeNode(NamedTuple):
    tweet_id: str
    author_id: Optional[str]
    created_at: int


@dataclass
class Cascade:
    """Rooted retweet tree; nodes[0] is the root, both lists in BFS order."""

    root_id: str
    nodes: list[CascadeNode]
    edges: list[Edge]
    time_violations: tuple[str, ...] = ()

    def canonical_form(self) -> tuple[str, frozenset[CascadeNode], frozenset[Edge]]:
        """Order-insensitive identity: a rooted tree is exactly its edge set."""
        return (self.root_id, frozenset(self.nodes), frozenset(self.edges))


@dataclass
class CascadeMetrics:
    size_users: int
    size_tweets: int
    depth: int
    times_to_k: dict[int, float]


@dataclass
class ReconstructionResult:
    cascades: list[Cascade]
    dropped_edges: int


@dataclass
class AuthorshipStats:
    per_author: dict[str, int]
    histogram: dict[int, int]
    share_multi: float


@dataclass
class CohortReport:
    """Per-cohort cascade summary backing the published-figure analogues."""

    label: str
    n_cascades: int
    sizes_users: list[int]
    sizes_tweets: list[int]
    ccdf: list[tuple[int, float]]
    velocity: dict[int, float]
    velocity_counts: dict[int, int]
    authorship_histogram: dict[int, int]
    share_multi: float
    mean_size_users: Optional[float]
    mean_size_tweets: Optional[float]
    top_q: float
    top_q_size_users: Optional[int]
    time_violation_count: int = 0


def build_edgelist(records: Iterable[TweetRecord]) -> list[Edge]:
    """One (child, parent) edge per retweet record.

    Raises EdgelistError on a duplicate child (a tweet cannot retweet twice)
    or a self-reference.
    """
    edges: list[Edge] = []
    seen: set[str] = set()
    retweet = RefKind.RETWEET
    add_seen = seen.add
    add_edge = edges.append
    for record in records:
        if record.ref_kind is not retweet:
            continue
        child_id = record.id
        parent_id = record.ref_id
        if parent_id is None:
            raise EdgelistError(f"retweet {child_id} has no ref_id")
        if child_id == parent_id:
            raise EdgelistError(f"self-referencing retweet: {child_id}")
        if child_id in seen:
            raise EdgelistError(f"duplicate child in edgelist: {child_id}")
        add_seen(child_id)
        add_edge(Edge(child_id, parent_id))
    return edges


#: child-index entry: (created_at, child_id, child_author, edge)
_ChildEntry = tuple[int, str, Optional[str], Edge]


def _build_child_index(
    edges: Iterable[Edge], by_id: dict[str, TweetRecord]
) -> tuple[dict[str, list[_ChildEntry]], int]:
    """Index parent -> children in (created_at, child_id) order, dropping
    edges with either endpoint missing from the corpus. The original edge
    object rides along so BFS does not rebuild it."""
    children: dict[str, list[_ChildEntry]] = {}
    dropped = 0
    get = by_id.get
    for edge in edges:
        child_id, parent_id = edge
        child = get(child_id)
        if child is None or parent_id not in by_id:
            dropped += 1
            continue
        if not isinstance(edge, Edge):
            edge = Edge(child_id, parent_id)
        entry = (child.created_at, child_id, child.author_id, edge)
        bucket = children.get(parent_id)
        if bucket is None:
            children[parent_id] = [entry]
        else:
            bucket.append(entry)
    for child_list in children.values():
        child_list.sort(key=_entry_sort_key)
    return children, dropped


def _entry_sort_key(entry: _ChildEntry) -> tuple[int, str]:
    return entry[0], entry[1]


def _bfs_one(
    root_id: str,
    children: dict[str, list[_ChildEntry]],
    by_id: dict[str, TweetRecord],
) -> Cascade:
    root = by_id[root_id]
    nodes = [CascadeNode(root_id, root.author_id, root.created_at)]
    edges: list[Edge] = []
    violations: list[str] = []
    queue = deque(((root_id, root.created_at),))
    pop = queue.popleft
    push = queue.append
    get_children = children.get
    add_node = nodes.append
    add_edge = edges.append
    while queue:
        parent_id, parent_ts = pop()
        for child_ts, child_id, child_author, edge in get_children(parent_id, ()):
            add_node(CascadeNode(child_id, child_author, child_ts))
            add_edge(edge)
            if child_ts < parent_ts:
                violations.append(child_id)
            push((child_id, child_ts))
    return Cascade(root_id, nodes, edges, tuple(violations))


def reconstruct(
    roots: Iterable[str],
    edges: Iterable[Edge],
    records: Sequence[TweetRecord],
    threads: int = 1,
) -> ReconstructionResult:
    """Breadth-first reconstruction of one cascade per root.

    Cascades come back sorted by root id regardless of input order or thread
    count. Roots must exist in the corpus; missing upstream data only makes
    cascades smaller (dropped edge count is reported).
    """
    by_id = {r.id: r for r in records}
    root_list = sorted(set(roots))
    for root_id in root_list:
        if root_id not in by_id:
            raise ValueError(f"root {root_id} not found in corpus")
    children, dropped = _build_child_index(edges, by_id)
    if threads > 1 and len(root_list) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            cascades = list(pool.map(lambda r: _bfs_one(r, children, by_id), root_list))
    else:
        cascades = [_bfs_one(r, children, by_id) for r in root_list]
    return ReconstructionResult(cascades=cascades, dropped_edges=dropped)


def metrics(cascade: Cascade) -> CascadeMetrics:
    """Unique-user and tweet counts, depth, and time-to-k-th-retweet map.

    Nodes without an author_id each count as a distinct user. times_to_k[k]
    is the minutes from the root to the k-th earliest retweet, defined for
    1 <= k <= retweet count; it is non-decreasing in k by construction.
    """
    authors = set()
    anonymous = 0
    for node in cascade.nodes:
        if node.author_id is None:
            anonymous += 1
        else:
            authors.add(node.author_id)
    size_users = len(authors) + anonymous
    size_tweets = len(cascade.nodes)

    depth = 0
    if cascade.edges:
        depth_of = {cascade.root_id: 0}
        for edge in cascade.edges:  # BFS order: parent depth known before child
            d = depth_of[edge.parent_id] + 1
            depth_of[edge.child_id] = d
            if d > depth:
                depth = d

    root_ts = cascade.nodes[0].created_at
    retweet_ts = sorted(node.created_at for node in cascade.nodes[1:])
    times_to_k = {
        k: (ts - root_ts) / MS_PER_MINUTE for k, ts in enumerate(retweet_ts, start=1)
    }
    return CascadeMetrics(size_users, size_tweets, depth, times_to_k)


def velocity_curve(cascades: Sequence[Cascade], ks: Sequence[int]) -> dict[int, float]:
    """Median minutes to reach k retweets, over cascades with >= k retweets.

    k values no cascade reaches are absent from the map. The median is per-k
    over qualifying cascades, so the curve is not forced to be monotone when
    the qualifying set shrinks with k.
    """
    if not ks:
        raise ValueError("ks must be non-empty")
    all_times = [metrics(c).times_to_k for c in cascades]
    curve: dict[int, float] = {}
    for k in ks:
        qualifying = [t[k] for t in all_times if k in t]
        if qualifying:
            curve[k] = median(qualifying)
    return curve


def cascades_per_user(roots: Sequence[TweetRecord]) -> AuthorshipStats:
    """Cascade counts per root author and the share of multi-cascade authors.

    Roots without an author_id count as distinct anonymous authors.
    """
    counts: Counter = Counter()
    for root in roots:
        key = root.author_id if root.author_id is not None else f"<anon:{root.id}>"
        counts[key] += 1
    histogram = dict(Counter(counts.values()))
    n_authors = len(counts)
    share = (
        sum(1 for c in counts.values() if c >= 2) / n_authors if n_authors else 0.0
    )
    return AuthorshipStats(per_author=dict(counts), histogram=histogram, share_multi=share)


def size_ccdf(sizes: Sequence[int]) -> list[tuple[int, float]]:
    """CCDF points (s, P(size >= s)) at each distinct observed size, ascending."""
    if not sizes:
        raise ValueError("size_ccdf requires at least one cascade")
    n = len(sizes)
    ordered = sorted(sizes)
    points: list[tuple[int, float]] = []
    for i, s in enumerate(ordered):
        if i == 0 or s != ordered[i - 1]:
            points.append((s, (n - i) / n))
    return points


def nearest_rank_quantile(values: Sequence[int], q: float) -> int:
    """Nearest-rank quantile, exclusive variant: rank floor(q*n)+1 (clamped).

    Chosen so quantile(0.99) of sizes 1..100 is 100, i.e. the smallest size
    the top 1% of cascades reach ("top 1% reach at least X" semantics).
    """
    if not values:
        raise ValueError("quantile of empty sample")
    if not (0.0 <= q <= 1.0):
        raise ValueError(f"q must be in [0, 1], got {q}")
    ordered = sorted(values)
    n = len(ordered)
    rank = min(n, math.floor(q * n) + 1)
    return ordered[rank - 1]


def build_cohort_report(
    label: str,
    cascades: Sequence[Cascade],
    roots: Sequence[TweetRecord],
    ks: Sequence[int],
    top_q: float = 0.99,
) -> CohortReport:
    """Aggregate size distribution, velocity curve and authorship histogram."""
    per_cascade = [metrics(c) for c in cascades]
    sizes_users = [m.size_users for m in per_cascade]
    sizes_tweets = [m.size_tweets for m in per_cascade]
    authorship = cascades_per_user(roots)

    velocity: dict[int, float] = {}
    velocity_counts: dict[int, int] = {}
    for k in ks:
        qualifying = [m.times_to_k[k] for m in per_cascade if k in m.times_to_k]
        if qualifying:
            velocity[k] = median(qualifying)
            velocity_counts[k] = len(qualifying)

    n = len(cascades)
    return CohortReport(
        label=label,
        n_cascades=n,
        sizes_users=sizes_users,
        sizes_tweets=sizes_tweets,
        ccdf=size_ccdf(sizes_users) if n else [],
        velocity=velocity,
        velocity_counts=velocity_counts,
        authorship_histogram=authorship.histogram,
        share_multi=authorship.share_multi,
        mean_size_users=sum(sizes_users) / n if n else None,
        mean_size_tweets=sum(sizes_tweets) / n if n else None,
        top_q=top_q,
        top_q_size_users=nearest_rank_quantile(sizes_users, top_q) if n else None,
        time_violation_count=sum(len(c.time_violations) for c in cascades),
    )


# --------------------------------------------------------------------------
# File formats
# --------------------------------------------------------------------------


def write_edgelist_csv(edges: Iterable[Edge], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("child_id,parent_id\n")
        for edge in edges:
            handle.write(f"{edge.child_id},{edge.parent_id}\n")


def read_edgelist_csv(path: Union[str, Path]) -> list[Edge]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "child_id,parent_id":
        raise EdgelistError(f"bad edgelist header in {path}")
    edges = []
    for line in lines[1:]:
        if line.strip():
            child, _, parent = line.partition(",")
            edges.append(Edge(child, parent))
    return edges


def cascade_to_doc(cascade: Cascade) -> str:
    data = {
        "root_id": cascade.root_id,
        "nodes": [[n.tweet_id, n.author_id, n.created_at] for n in cascade.nodes],
        "edges": [[e.child_id, e.parent_id] for e in cascade.edges],
        "time_violations": list(cascade.time_violations),
    }
    return json.dumps(data, ensure_ascii=False, separators=(",", ":"))


def cascade_from_doc(doc: str) -> Cascade:
    data = json.loads(doc)
    return Cascade(
        root_id=data["root_id"],
        nodes=[CascadeNode(*n) for n in data["nodes"]],
        edges=[Edge(*e) for e in data["edges"]],
        time_violations=tuple(data.get("time_violations", ())),
    )


def write_cascades_jsonl(cascades: Iterable[Cascade], path: Union[str, Path]) -> None:
    """One structured-text document per cascade, one per line."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for cascade in cascades:
            handle.write(cascade_to_doc(cascade))
            handle.write("\n")


def read_cascades_jsonl(path: Union[str, Path]) -> list[Cascade]:
    cascades = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                cascades.append(cascade_from_doc(line))
    return cascades


def read_cohort_report_csvs(out_dir: Union[str, Path]) -> dict[str, dict]:
    """Parse the three report CSVs back into per-cohort mappings."""
    out = Path(out_dir)
    reports: dict[str, dict] = {}

    def bucket(label: str) -> dict:
        return reports.setdefault(
            label, {"ccdf": [], "velocity": {}, "velocity_counts": {}, "authorship": {}}
        )

    lines = (out / "report_ccdf.csv").read_text(encoding="utf-8").splitlines()
    if lines[0] != "cohort,size_users,ccdf":
        raise EdgelistError(f"bad ccdf header {lines[0]!r}")
    for line in lines[1:]:
        if line.strip():
            label, size, prob = line.split(",")
            bucket(label)["ccdf"].append((int(size), float(prob)))

    lines = (out / "report_velocity.csv").read_text(encoding="utf-8").splitlines()
    if lines[0] != "cohort,k,median_minutes,n_cascades":
        raise EdgelistError(f"bad velocity header {lines[0]!r}")
    for line in lines[1:]:
        if line.strip():
            label, k, med, n = line.split(",")
            bucket(label)["velocity"][int(k)] = float(med)
            bucket(label)["velocity_counts"][int(k)] = int(n)

    lines = (out / "report_authorship.csv").read_text(encoding="utf-8").splitlines()
    if lines[0] != "cohort,cascades_per_author,n_authors":
        raise EdgelistError(f"bad authorship header {lines[0]!r}")
    for line in lines[1:]:
        if line.strip():
            label, count, n = line.split(",")
            bucket(label)["authorship"][int(count)] = int(n)
    return reports


def write_cohort_report_csvs(
    reports: Sequence[CohortReport], out_dir: Union[str, Path]
) -> None:
    out = Path(out_dir)
    with open(out / "report_ccdf.csv", "w", encoding="utf-8", newline="\n") as handle:
        handle.write("cohort,size_users,ccdf\n")
        for report in reports:
            for size, prob in report.ccdf:
                handle.write(f"{report.label},{size},{prob!r}\n")
    with open(out / "report_velocity.csv", "w", encoding="utf-8", newline="\n") as handle:
        handle.write("cohort,k,median_minutes,n_cascades\n")
        for report in reports:
            for k in sorted(report.velocity):
                handle.write(
                    f"{report.label},{k},{report.velocity[k]!r},{report.velocity_counts[k]}\n"
                )
    with open(out / "report_authorship.csv", "w", encoding="utf-8", newline="\n") as handle:
        handle.write("cohort,cascades_per_author,n_authors\n")
        for report in reports:
            for count in sorted(report.authorship_histogram):
                handle.write(f"{report.label},{count},{report.authorship_histogram[count]}\n")

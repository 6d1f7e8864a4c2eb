"""Finite cover models: a point set, an ordered cover and an optional complex.

A model is the combinatorial stand-in for a space with an open cover.  All
tuple enumerations are ordered lexicographically by the position of each
point in the model's point list, so every downstream basis is reproducible.
"""

from __future__ import annotations

import itertools
import json
import os
import threading
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import BudgetError, ModelError

Point = object  # point ids are ints or strings; order comes from the model

DEFAULT_BUDGET = 2_000_000
BUDGET_ENV_VAR = "LOCCO_BUDGET"


def enumeration_budget(override: Optional[int] = None) -> int:
    """Effective tuple budget: explicit override, else env var, else default."""
    if override is not None:
        return int(override)
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError as exc:
        raise ModelError(f"{BUDGET_ENV_VAR} must be an integer, got {raw!r}") from exc


@dataclass(frozen=True)
class TupleSet:
    """A finite set of point tuples of fixed length with a frozen basis order."""

    arity: int                      # tuple length, n + 1 for level n
    tuples: tuple                   # tuples sorted by point order
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "_index", {t: k for k, t in enumerate(self.tuples)})

    @property
    def degree(self) -> int:
        return self.arity - 1

    def __len__(self) -> int:
        return len(self.tuples)

    def __contains__(self, item) -> bool:
        return item in self._index

    def index(self, item) -> int:
        return self._index[item]


@dataclass(frozen=True)
class Nerve:
    """Index tuples (strictly increasing) whose cover sets meet."""

    simplices: tuple  # tuple of index tuples, grouped by dimension, lex sorted

    def of_dimension(self, p: int) -> tuple:
        return tuple(s for s in self.simplices if len(s) == p + 1)

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def __contains__(self, item) -> bool:
        return tuple(item) in set(self.simplices)

    def __len__(self) -> int:
        return len(self.simplices)


@dataclass(frozen=True)
class CoverModel:
    """Finite point set with an ordered cover and an optional simplicial complex."""

    points: tuple
    cover: tuple                    # tuple of frozensets, file order is normative
    cover_names: tuple
    complex: Optional[tuple] = None  # strictly increasing vertex tuples
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "cover", tuple(frozenset(m) for m in self.cover))
        object.__setattr__(self, "point_index", {p: k for k, p in enumerate(self.points)})
        self.validate()

    # -- validation ---------------------------------------------------------

    def validate(self) -> None:
        if len(self.points) == 0:
            raise ModelError("model has no points")
        if len(set(self.points)) != len(self.points):
            raise ModelError("duplicate point ids")
        if len(self.cover) == 0:
            raise ModelError("model has no cover sets")
        if len(self.cover_names) != len(self.cover):
            raise ModelError("cover_names must match cover length")
        pts = set(self.points)
        covered = set()
        for name, members in zip(self.cover_names, self.cover):
            if not members:
                raise ModelError(f"cover set {name} is empty")
            stray = members - pts
            if stray:
                raise ModelError(f"cover set {name} contains unknown points {sorted(map(str, stray))}")
            covered |= members
        if covered != pts:
            missing = sorted(str(p) for p in pts - covered)
            raise ModelError(f"cover does not cover the points {missing}")
        if self.complex is not None:
            self._validate_complex()

    def _validate_complex(self) -> None:
        seen = set()
        for simplex in self.complex:
            if len(simplex) == 0:
                raise ModelError("empty simplex in complex")
            for v in simplex:
                if v not in self.point_index:
                    raise ModelError(f"simplex {simplex} uses unknown vertex {v!r}")
            ranks = [self.point_index[v] for v in simplex]
            if any(a >= b for a, b in zip(ranks, ranks[1:])):
                raise ModelError(f"simplex {simplex} is not strictly increasing in point order")
            if simplex in seen:
                raise ModelError(f"duplicate simplex {simplex}")
            seen.add(simplex)
        for simplex in seen:
            if len(simplex) > 1:
                for k in range(len(simplex)):
                    face = simplex[:k] + simplex[k + 1:]
                    if face not in seen:
                        raise ModelError(f"complex not closed under faces: {face} missing from {simplex}")

    # -- ordering helpers ----------------------------------------------------

    def point_key(self, t: Sequence) -> tuple:
        return tuple(self.point_index[p] for p in t)

    def sort_tuples(self, tuples: Iterable[tuple]) -> tuple:
        return tuple(sorted(set(tuples), key=self.point_key))

    def sort_points(self, pts: Iterable) -> tuple:
        return tuple(sorted(set(pts), key=lambda p: self.point_index[p]))

    # -- cover combinatorics --------------------------------------------------

    def diagonal_neighborhood(self, n: int, budget: Optional[int] = None) -> TupleSet:
        """All (n+1)-tuples lying in some cover set's (n+1)-st power."""
        if n < 0:
            raise ModelError(f"level must be nonnegative, got {n}")
        with self._lock:
            cached = self._cache.get(("diag", n))
        if cached is not None:
            return cached
        limit = enumeration_budget(budget)
        size = len(self.points) ** (n + 1)
        if size > limit:
            raise BudgetError(size, limit, f"|X|^{n + 1} = {len(self.points)}^{n + 1}")
        found = set()
        for members in self.cover:
            ordered = self.sort_points(members)
            found.update(itertools.product(ordered, repeat=n + 1))
        ts = TupleSet(arity=n + 1, tuples=self.sort_tuples(found), label=f"diag[{n}]")
        with self._lock:
            self._cache[("diag", n)] = ts
        return ts

    def intersection(self, indices: Sequence[int]) -> tuple:
        """Common points of the named cover sets, in point order."""
        idx = tuple(indices)
        if len(idx) == 0:
            raise ModelError("need at least one cover index")
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise ModelError(f"cover indices must be strictly increasing, got {idx}")
        for i in idx:
            if not (0 <= i < len(self.cover)):
                raise ModelError(f"cover index {i} out of range 0..{len(self.cover) - 1}")
        common = set(self.cover[idx[0]])
        for i in idx[1:]:
            common &= self.cover[i]
        return self.sort_points(common)

    def intersection_power(self, indices: Sequence[int], arity: int) -> TupleSet:
        """All arity-tuples drawn from the intersection of the named sets."""
        key = ("ipow", tuple(indices), arity)
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            return cached
        base = self.intersection(indices)
        ts = TupleSet(
            arity=arity,
            tuples=tuple(itertools.product(base, repeat=arity)),
            label=f"U{tuple(indices)}^{arity}",
        )
        with self._lock:
            self._cache[key] = ts
        return ts

    def nerve(self, max_dim: Optional[int] = None) -> Nerve:
        """All strictly increasing index tuples with nonempty intersection."""
        key = ("nerve", max_dim)
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            return cached
        top = len(self.cover) if max_dim is None else min(max_dim + 1, len(self.cover))
        simplices = []
        # a subset meets only if all its 2-subsets meet; grow dimensionwise
        previous = [(i,) for i in range(len(self.cover)) if self.cover[i]]
        simplices.extend(previous)
        for size in range(2, top + 1):
            current = []
            for base in previous:
                common = set(self.cover[base[0]])
                for i in base[1:]:
                    common &= self.cover[i]
                for j in range(base[-1] + 1, len(self.cover)):
                    if common & self.cover[j]:
                        current.append(base + (j,))
            if not current:
                break
            simplices.extend(current)
            previous = current
        nerve = Nerve(simplices=tuple(sorted(simplices, key=lambda s: (len(s), s))))
        with self._lock:
            self._cache[key] = nerve
        return nerve

    def u_small_subcomplex(self) -> tuple:
        """Simplices of the model complex whose vertex set sits in one cover set."""
        if self.complex is None:
            raise ModelError("model has no complex")
        out = []
        for simplex in self.complex:
            vs = set(simplex)
            if any(vs <= members for members in self.cover):
                out.append(simplex)
        return tuple(sorted(out, key=lambda s: (len(s), self.point_key(s))))

    def full_subcomplex(self, vertex_set: Iterable) -> tuple:
        """Simplices of the model complex with all vertices in the given set."""
        if self.complex is None:
            raise ModelError("model has no complex")
        vs = set(vertex_set)
        out = [s for s in self.complex if set(s) <= vs]
        return tuple(sorted(out, key=lambda s: (len(s), self.point_key(s))))

    # -- serialization --------------------------------------------------------

    def to_json_dict(self) -> dict:
        doc = {
            "points": list(self.points),
            "cover": [
                {"name": name, "members": list(self.sort_points(members))}
                for name, members in zip(self.cover_names, self.cover)
            ],
        }
        if self.complex is not None:
            doc["complex"] = [list(s) for s in self.complex]
        if self.name:
            doc["name"] = self.name
        return doc


def model_from_json_dict(doc: dict, name: str = "") -> CoverModel:
    if not isinstance(doc, dict):
        raise ModelError("model document must be a JSON object")
    for key in ("points", "cover"):
        if key not in doc:
            raise ModelError(f"model document lacks required key {key!r}")
    points = doc["points"]
    if not isinstance(points, list):
        raise ModelError("points must be a list")
    cover_raw = doc["cover"]
    if not isinstance(cover_raw, list):
        raise ModelError("cover must be a list")
    cover, names = [], []
    for k, entry in enumerate(cover_raw):
        if not isinstance(entry, dict) or "members" not in entry:
            raise ModelError(f"cover entry {k} must be an object with a members list")
        members = entry["members"]
        if not isinstance(members, list):
            raise ModelError(f"cover entry {k} members must be a list")
        cover.append(frozenset(members))
        names.append(str(entry.get("name", f"U{k}")))
    complex_raw = doc.get("complex")
    cx = None
    if complex_raw is not None:
        if not isinstance(complex_raw, list):
            raise ModelError("complex must be a list of vertex lists")
        cx = tuple(tuple(s) for s in complex_raw)
    return CoverModel(
        points=tuple(points),
        cover=tuple(cover),
        cover_names=tuple(names),
        complex=cx,
        name=str(doc.get("name", name)),
    )


def load_model(path: str) -> CoverModel:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return model_from_json_dict(doc, name=os.path.splitext(os.path.basename(path))[0])


def left_invariant_cover(m: int, k: int) -> CoverModel:
    """Arc cover of the cyclic group of order m by radius-k balls around each element.

    The complex is the m-cycle.  k is capped so that arcs stay proper and the
    cycle edges stay cover-small: 1 <= k <= floor((m-1)/2) - 1.
    """
    if m < 3:
        raise ModelError(f"cyclic order must be at least 3, got {m}")
    cap = (m - 1) // 2 - 1
    if cap < 1:
        raise ModelError(f"cyclic order {m} leaves no valid radius")
    if not (1 <= k <= cap):
        raise ModelError(f"radius must satisfy 1 <= k <= {cap} for m = {m}, got {k}")
    points = tuple(range(m))
    cover = tuple(frozenset((g + d) % m for d in range(-k, k + 1)) for g in range(m))
    names = tuple(f"U{g}" for g in range(m))
    simplices = [(v,) for v in range(m)]
    for g in range(m):
        edge = tuple(sorted((g, (g + 1) % m)))
        simplices.append(edge)
    cx = tuple(sorted(set(simplices), key=lambda s: (len(s), s)))
    return CoverModel(points=points, cover=cover, cover_names=names, complex=cx,
                      name=f"cyclic{m}_arcs_k{k}")


def arc(m: int, radius: int, center: int = 0) -> frozenset:
    """Radius-ball arc around a element of the cyclic group of order m."""
    if radius < 0:
        raise ModelError(f"radius must be nonnegative, got {radius}")
    return frozenset((center + d) % m for d in range(-radius, radius + 1))


def shrink_relation_check(m: int, k_small: int, k_big: int) -> bool:
    """Whether difference tuples of the small arc stay inside the big arc.

    For arcs around the identity this asks that the set of products
    v0^{-1} v1 (v0, v1 in the small arc) is contained in the big arc.
    """
    if m < 1:
        raise ModelError(f"cyclic order must be positive, got {m}")
    if k_small < 0 or k_big < 0:
        raise ModelError("radii must be nonnegative")
    small = arc(m, k_small)
    big = arc(m, k_big)
    diffs = {(b - a) % m for a in small for b in small}
    return diffs <= big

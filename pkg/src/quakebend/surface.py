"""Pants decompositions, Fenchel-Nielsen holonomy and trace-square characters.

The fundamental group is presented as the fundamental group of the graph of
groups dual to a pants decomposition. Choose a spanning tree of the pants
graph rooted at pants 0. The generators are

* ``c{P}.{k}``: the boundary loop of cuff ``k`` of pants ``P``, carried to
  the base point along the tree;
* ``t{m}``: a stable letter for every curve ``m`` outside the tree.

The relators are ``c{P}.0 c{P}.1 c{P}.2`` for every pants, ``c{P}.{i} c{Q}.{j}``
for a tree curve glued from cuff (P, i) to cuff (Q, j), and
``t c{Q}.{j}^-1 t^-1 c{P}.{i}^-1`` for a curve outside the tree.

On top of this presentation sit the adapted generators: a curve loop
``a{m}`` and a dual loop ``b{m}`` for every pants curve. The dual loop crosses
its curve once when the curve is non-separating and twice otherwise.

A word is a tuple of ``(name, exponent)`` letters with exponent +1 or -1.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import BadGenus, InvalidLength, UnknownGenerator
from .moebius import MoebiusElement

Letter = tuple[str, int]
Word = tuple[Letter, ...]

J = np.array([[0, 1], [-1, 0]], dtype=np.clongdouble)
TEMPLATES = ("chain", "theta")


# ---------------------------------------------------------------------------
# words


def invert_word(word: Word) -> Word:
    return tuple((name, -e) for name, e in reversed(word))


def reduce_word(word: Iterable[Letter]) -> Word:
    out: list[Letter] = []
    for letter in word:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def parse_word(text: str) -> Word:
    """Parse ``"a0 b1^-1 t2"`` into a word."""
    out = []
    for tok in text.split():
        if tok.endswith("^-1"):
            out.append((tok[:-3], -1))
        else:
            out.append((tok, 1))
    return tuple(out)


def word_str(word: Word) -> str:
    return " ".join(name if e == 1 else f"{name}^-1" for name, e in word) or "1"


# ---------------------------------------------------------------------------
# combinatorics


@dataclass(frozen=True)
class Curve:
    """A pants curve glued from cuff ``ends[0]`` to cuff ``ends[1]``.

    The curve loop is the boundary loop of ``ends[0]``; crossing from the
    pants of ``ends[0]`` to the pants of ``ends[1]`` counts as +1.
    """

    index: int
    ends: tuple[tuple[int, int], tuple[int, int]]
    in_tree: bool
    separating: bool


@dataclass(frozen=True)
class PantsDecomposition:
    genus: int
    template: str
    curves: tuple[Curve, ...]
    n_pants: int
    tree_paths: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def n_curves(self) -> int:
        return len(self.curves)

    def cuff_curve(self, node: int, cuff: int) -> int:
        return self._cuff_map[(node, cuff)]

    @cached_property
    def _cuff_map(self) -> dict:
        out = {}
        for c in self.curves:
            for end in c.ends:
                out[end] = c.index
        return out

    @cached_property
    def presentation_generators(self) -> tuple[str, ...]:
        gens = [f"c{p}.{k}" for p in range(self.n_pants) for k in range(3)]
        gens += [f"t{c.index}" for c in self.curves if not c.in_tree]
        return tuple(gens)

    @cached_property
    def relations(self) -> tuple[tuple[Word, Word], ...]:
        """Defining relations as equations ``lhs = rhs``."""
        rels = []
        for p in range(self.n_pants):
            rels.append((((f"c{p}.0", 1), (f"c{p}.1", 1)), ((f"c{p}.2", -1),)))
        for c in self.curves:
            (p, i), (q, j) = c.ends
            if c.in_tree:
                rels.append((((f"c{p}.{i}", 1),), ((f"c{q}.{j}", -1),)))
            else:
                t = f"t{c.index}"
                rels.append((((t, 1), (f"c{q}.{j}", -1)), ((f"c{p}.{i}", 1), (t, 1))))
        return tuple(rels)

    @property
    def relators(self) -> tuple[Word, ...]:
        return tuple(reduce_word(lhs + invert_word(rhs)) for lhs, rhs in self.relations)

    @cached_property
    def adapted(self) -> dict[str, Word]:
        """Adapted generators ``a{m}``, ``b{m}`` as words in the presentation."""
        out = {}
        for c in self.curves:
            out[f"a{c.index}"] = ((_cuff_gen(c.ends[0]), 1),)
            out[f"b{c.index}"] = self._dual_word(c)
        return out

    @property
    def adapted_names(self) -> tuple[str, ...]:
        return tuple(n for c in self.curves for n in (f"a{c.index}", f"b{c.index}"))

    def _dual_word(self, c: Curve) -> Word:
        if not c.in_tree:
            return ((f"t{c.index}", 1),)
        if c.separating:
            (p, i), (q, j) = c.ends
            return ((f"c{p}.{(i + 1) % 3}", 1), (f"c{q}.{(j + 1) % 3}", 1))
        # a tree curve on the fundamental cycle of some stable letter
        for e in self.curves:
            if e.in_tree:
                continue
            out_path = self.tree_paths[e.ends[0][0]]
            back_path = self.tree_paths[e.ends[1][0]]
            k = _common_prefix(out_path, back_path)
            if c.index in out_path[k:]:
                return ((f"t{e.index}", 1),)
            if c.index in back_path[k:]:
                return ((f"t{e.index}", -1),)
        raise AssertionError("non-separating tree curve outside every cycle")

    def expand(self, word: Word) -> Word:
        """Rewrite a word in adapted and/or presentation generators in the presentation."""
        out: list[Letter] = []
        pres = set(self.presentation_generators)
        for name, e in word:
            if name in pres:
                out.append((name, e))
            elif name in self.adapted:
                w = self.adapted[name]
                out.extend(w if e == 1 else invert_word(w))
            else:
                raise UnknownGenerator(name)
        return tuple(out)

    def complement_components(self, removed: Iterable[int]) -> list[tuple[int, ...]]:
        """Pants of each component of the surface cut along the curves ``removed``."""
        removed = set(removed)
        adj = {p: [] for p in range(self.n_pants)}
        for c in self.curves:
            if c.index in removed:
                continue
            (p, _), (q, _) = c.ends
            adj[p].append(q)
            adj[q].append(p)
        seen, comps = set(), []
        for start in range(self.n_pants):
            if start in seen:
                continue
            comp, queue = [], deque([start])
            seen.add(start)
            while queue:
                p = queue.popleft()
                comp.append(p)
                for q in adj[p]:
                    if q not in seen:
                        seen.add(q)
                        queue.append(q)
            comps.append(tuple(sorted(comp)))
        return comps

    def subsurface_generators(self, nodes: Sequence[int], removed: Iterable[int]) -> list[Word]:
        """Words generating (a conjugate of) the fundamental group of a complementary piece."""
        removed = set(removed)
        nodes = list(nodes)
        node_set = set(nodes)
        inner = [
            c
            for c in self.curves
            if c.index not in removed and c.ends[0][0] in node_set and c.ends[1][0] in node_set
        ]
        base = nodes[0]
        transport: dict[int, Word] = {base: ()}
        used: set[int] = set()
        queue = deque([base])
        while queue:
            p = queue.popleft()
            for c in inner:
                for a, b, sign in ((c.ends[0][0], c.ends[1][0], 1), (c.ends[1][0], c.ends[0][0], -1)):
                    if a == p and b not in transport:
                        transport[b] = reduce_word(transport[p] + _edge_letter(c, sign))
                        used.add(c.index)
                        queue.append(b)
        gens = []
        for q in nodes:
            w = transport[q]
            for k in range(3):
                gens.append(reduce_word(w + ((f"c{q}.{k}", 1),) + invert_word(w)))
        for c in inner:
            if c.index in used:
                continue
            a, b = c.ends[0][0], c.ends[1][0]
            gens.append(reduce_word(transport[a] + _edge_letter(c, 1) + invert_word(transport[b])))
        return gens

    @cached_property
    def generator_crossings(self) -> dict[str, tuple]:
        """Crossings ``(curve, sign, conjugator)`` of the based path of each generator.

        The crossed lift is ``conjugator`` applied to the base lift of the
        curve, whose stabilizer is the curve loop ``a{curve}``.
        """
        out = {}
        for p in range(self.n_pants):
            path = self.tree_paths[p]
            for k in range(3):
                g = _cuff_gen((p, k))
                fwd = [(m, 1, ()) for m in path]
                back = [(m, -1, ((g, 1),)) for m in reversed(path)]
                out[g] = tuple(fwd + back)
        for c in self.curves:
            if c.in_tree:
                continue
            t = f"t{c.index}"
            fwd = [(m, 1, ()) for m in self.tree_paths[c.ends[0][0]]]
            back = [(m, -1, ((t, 1),)) for m in reversed(self.tree_paths[c.ends[1][0]])]
            out[t] = tuple(fwd + [(c.index, 1, ())] + back)
        return out

    def word_crossings(self, word: Word) -> list[tuple[int, int, Word]]:
        """Freely reduced crossing sequence of the based path of ``word``."""
        word = self.expand(word)
        seq: list[tuple[int, int, Word]] = []
        prefix: Word = ()
        for name, e in word:
            own = self.generator_crossings[name]
            if e == -1:
                inv = ((name, -1),)
                own = tuple((m, -s, reduce_word(inv + h)) for m, s, h in reversed(own))
            for m, s, h in own:
                item = (m, s, reduce_word(prefix + h))
                if seq and seq[-1][0] == m and seq[-1][1] == -s and seq[-1][2] == item[2]:
                    seq.pop()
                else:
                    seq.append(item)
            prefix = reduce_word(prefix + ((name, e),))
        return seq


def _cuff_gen(end: tuple[int, int]) -> str:
    return f"c{end[0]}.{end[1]}"


def _edge_letter(c: Curve, sign: int) -> Word:
    if c.in_tree:
        return ()
    return ((f"t{c.index}", sign),)


def _common_prefix(a, b) -> int:
    k = 0
    while k < len(a) and k < len(b) and a[k] == b[k]:
        k += 1
    return k


def _chain_edges(genus: int):
    n = 2 * genus - 2
    edges = [((i, 0), ((i + 1) % n, 1)) for i in range(n)]
    edges += [((2 * k, 2), (2 * k + 1, 2)) for k in range(genus - 1)]
    return n, edges


def _theta_edges(genus: int):
    n = 2 * genus - 2
    if genus == 2:
        return n, [((0, 0), (1, 0)), ((0, 1), (0, 2)), ((1, 1), (1, 2))]
    spine = [2 * k - 1 for k in range(1, genus - 1)]
    handles = [0] + [2 * k for k in range(1, genus - 1)] + [2 * genus - 3]
    bridges = [((handles[0], 0), (spine[0], 0))]
    bridges += [((spine[k], 1), (spine[k + 1], 0)) for k in range(len(spine) - 1)]
    bridges += [((spine[-1], 1), (handles[-1], 0))]
    bridges += [((s, 2), (h, 0)) for s, h in zip(spine, handles[1:-1])]
    loops = [((h, 1), (h, 2)) for h in handles]
    return n, bridges + loops


def _is_bridge(n, edges, idx) -> bool:
    (p, _), (q, _) = edges[idx]
    if p == q:
        return False
    adj = {v: [] for v in range(n)}
    for k, ((a, _), (b, _)) in enumerate(edges):
        if k != idx:
            adj[a].append(b)
            adj[b].append(a)
    seen, stack = {p}, [p]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return q not in seen


def build_pants(genus: int, template: str, edges, n: int) -> PantsDecomposition:
    """Orient the gluing list, pick a BFS spanning tree rooted at pants 0."""
    visited = {0}
    paths: dict[int, tuple[int, ...]] = {0: ()}
    oriented = list(edges)
    in_tree = [False] * len(edges)
    queue = deque([0])
    while queue:
        p = queue.popleft()
        for idx, (e0, e1) in enumerate(edges):
            if in_tree[idx]:
                continue
            for near, far in ((e0, e1), (e1, e0)):
                if near[0] == p and far[0] not in visited:
                    in_tree[idx] = True
                    oriented[idx] = (near, far)
                    visited.add(far[0])
                    paths[far[0]] = paths[p] + (idx,)
                    queue.append(far[0])
                    break
    if len(visited) != n:
        raise ValueError("pants graph is disconnected")
    curves = tuple(
        Curve(idx, tuple(oriented[idx]), in_tree[idx], _is_bridge(n, edges, idx))
        for idx in range(len(edges))
    )
    return PantsDecomposition(genus, template, curves, n, tuple(paths[p] for p in range(n)))


def standard_pants(genus: int, template: str = "chain") -> PantsDecomposition:
    """A deterministic pants decomposition of the closed genus-``genus`` surface.

    ``"chain"``: pants arranged in a necklace with chords; every curve is
    non-separating. For genus 2 this is two pants glued along three curves.

    ``"theta"``: one-holed tori (pants with a self-glued cuff) hung off a
    spine; the spine curves separate. For genus 2 curve 0 is the separating
    curve and curves 1, 2 are the handle curves.
    """
    if int(genus) != genus or genus < 2:
        raise BadGenus(f"genus must be an integer >= 2, got {genus}")
    if template == "chain":
        n, edges = _chain_edges(genus)
    elif template == "theta":
        n, edges = _theta_edges(genus)
    else:
        raise ValueError(f"unknown template {template!r}; expected one of {TEMPLATES}")
    P = build_pants(genus, template, edges, n)
    assert P.n_curves == 3 * genus - 3 and P.n_pants == 2 * genus - 2
    return P


# ---------------------------------------------------------------------------
# Fenchel-Nielsen holonomy


@dataclass(frozen=True)
class FNCoordinates:
    """Length and twist per pants curve; complex values give quakebent points."""

    lengths: np.ndarray
    twists: np.ndarray

    def __post_init__(self):
        lengths = np.asarray(self.lengths, dtype=complex).copy()
        twists = np.asarray(self.twists, dtype=complex).copy()
        if lengths.shape != twists.shape or lengths.ndim != 1:
            raise ValueError("lengths and twists must be 1-d arrays of equal size")
        if np.any(lengths.real <= 0):
            raise InvalidLength(f"lengths need positive real part, got {lengths}")
        lengths.setflags(write=False)
        twists.setflags(write=False)
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "twists", twists)

    @classmethod
    def uniform(cls, n: int, length: complex = 1.0, twist: complex = 0.0) -> "FNCoordinates":
        return cls(np.full(n, length), np.full(n, twist))

    def with_twists(self, twists) -> "FNCoordinates":
        return FNCoordinates(self.lengths, twists)

    @property
    def is_real(self) -> bool:
        return not (np.any(self.lengths.imag) or np.any(self.twists.imag))


CL = np.clongdouble  # holonomy is assembled in extended precision, stored in complex128


def _diag(x) -> np.ndarray:
    h = np.exp(CL(x) / 2)
    return np.array([[h, 0], [0, 1 / h]], dtype=CL)


def _inv(m: np.ndarray) -> np.ndarray:
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])


def _sl(m: np.ndarray) -> np.ndarray:
    return m / np.sqrt(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def pants_group(l0, l1, l2) -> list[np.ndarray]:
    """Boundary holonomies C0, C1, C2 with C0 C1 C2 = I and tr Ck = -2 cosh(lk / 2)."""
    x0, x1 = 2 * np.cosh(CL(l0) / 2), 2 * np.cosh(CL(l1) / 2)
    s = np.exp(CL(l2) / 2)
    a = np.array([[-x0, 1], [-1, 0]], dtype=CL)
    b = np.array([[0, s], [-1 / s, -x1]], dtype=CL)
    return [a, b, _inv(a @ b)]


def _fixed_pair(m: np.ndarray, length):
    # eigenvectors for -e^{l/2} (attracting) and -e^{-l/2} (repelling)
    out = []
    for lam in (-np.exp(CL(length) / 2), -np.exp(-CL(length) / 2)):
        a, b = m[0, 0] - lam, m[0, 1]
        c, d = m[1, 0], m[1, 1] - lam
        v = (-b, a) if abs(a) + abs(b) >= abs(c) + abs(d) else (-d, c)
        out.append(np.array(v, dtype=CL))
    return out


def cuff_frames(cs: list[np.ndarray], lengths) -> list[np.ndarray]:
    """Frames N_k with C_k = N_k (-D_{l_k}) N_k^-1.

    In the frame of cuff k the axis runs from 0 (repelling) to infinity
    (attracting), the pants lies over the half-plane Re z < 0, and the common
    perpendicular to the axis of cuff k + 1 has its foot at height 1 above 0.
    Twist zero lines these feet up.
    """
    frames = []
    for k in range(3):
        att, rep = _fixed_pair(cs[k], lengths[k])
        n = _sl(np.column_stack([att, rep]))
        nxt = (k + 1) % 3
        att2, rep2 = _fixed_pair(cs[nxt], lengths[nxt])
        ninv = _inv(n)
        p = ninv @ att2
        q = ninv @ rep2
        p, q = p[0] / p[1], q[0] / q[1]
        h = np.sqrt(p * q)
        if (p / h).real > 0:
            # rotate by pi about the axis so the pants lies over Re z < 0
            h = -h
        r = np.sqrt(h)
        frames.append(n @ np.array([[r, 0], [0, 1 / r]], dtype=CL))
    return frames


def _unit_lower(x: np.ndarray):
    """Unit-determinant lower-triangular T with T T^* proportional to ``x``, or None."""
    scale = np.trace(x).real
    if not (np.isfinite(scale) and scale > 0 and np.all(np.isfinite(x))):
        return None
    try:
        t = np.linalg.cholesky(x / scale)
    except np.linalg.LinAlgError:
        return None
    t00, t11 = t[0, 0].real, t[1, 1].real
    if not (t00 > 0 and t11 > 0):
        return None
    d = np.sqrt(t00 / t11)
    return np.array([[d, 0], [t[1, 0] / np.sqrt(t00 * t11), 1 / d]], dtype=CL)


def _spread(gs, frame) -> float:
    fi, f = _inv(frame).astype(complex), frame.astype(complex)
    with np.errstate(all="ignore"):
        s = float(sum(np.sum(np.abs(fi @ g @ f) ** 2) for g in gs))
    return s if np.isfinite(s) else math.inf


def balancing_frame(mats: Iterable[np.ndarray], rounds: int = 40) -> np.ndarray:
    """A frame that makes the summed squared entries of ``mats`` small after conjugation.

    The target is the point X of hyperbolic space with
    sum g X g^* + g^-1 X g^-* proportional to X. It is the Perron vector of
    that positive map. Round-off can spoil the eigenvector when entries are
    large, so the iteration "move the origin to sum g g^*" refines it. The
    returned frame is lower triangular with unit determinant, which makes
    conjugation by it exact up to round-off. It only needs to be roughly right.
    """
    gs = []
    for m in mats:
        g = np.asarray(m, dtype=complex)
        gs += [g, _inv(g)]
    candidates = [np.eye(2, dtype=CL)]

    herm = [
        np.array([[1, 0], [0, 0]], dtype=complex),
        np.array([[0, 0], [0, 1]], dtype=complex),
        np.array([[0, 1], [1, 0]], dtype=complex),
        np.array([[0, 1j], [-1j, 0]], dtype=complex),
    ]

    def coords(x):
        return np.array([x[0, 0].real, x[1, 1].real, x[0, 1].real, x[0, 1].imag])

    op = np.column_stack([coords(sum(g @ e @ g.conj().T for g in gs)) for e in herm])
    vals, vecs = np.linalg.eig(op)
    v = vecs[:, np.argmax(vals.real)]
    v = (v / v[np.argmax(np.abs(v))]).real
    x = sum(c * e for c, e in zip(v, herm))
    start = _unit_lower(x if x[0, 0].real > 0 else -x)
    if start is not None:
        candidates.append(start)

    total = min(candidates, key=lambda f: _spread(gs, f))
    cur = [(_inv(total).astype(complex)) @ g @ total.astype(complex) for g in gs]
    with np.errstate(all="ignore"):
        for _ in range(rounds):
            step = _unit_lower(sum(g @ g.conj().T for g in cur))
            if step is None:
                break
            total = total @ step
            si, st = _inv(step).astype(complex), step.astype(complex)
            cur = [si @ g @ st for g in cur]
            if abs(step[0, 0] - 1) < 1e-6 and abs(step[1, 0]) < 1e-6:
                break
    candidates.append(total)
    return min(candidates, key=lambda f: _spread(gs, f))


@dataclass(frozen=True, eq=False)
class SurfaceGroupRep:
    """Images of the presentation generators of a pants decomposition."""

    pants: PantsDecomposition
    images: dict = field(repr=False)

    def __post_init__(self):
        imgs = {}
        for n, m in self.images.items():
            imgs[n] = np.asarray(m.matrix if isinstance(m, MoebiusElement) else m, dtype=CL)
        missing = set(self.pants.presentation_generators) - set(imgs)
        if missing:
            raise UnknownGenerator(f"no image for {sorted(missing)}")
        object.__setattr__(self, "images", imgs)

    def matrix(self, name: str) -> np.ndarray:
        try:
            return self.images[name]
        except KeyError:
            raise UnknownGenerator(name) from None

    def word_matrix(self, word: Word) -> np.ndarray:
        m = np.eye(2, dtype=CL)
        for name, e in self.pants.expand(word):
            g = self.matrix(name)
            m = m @ (g if e == 1 else _inv(g))
        return m

    def evaluate(self, word: Word) -> MoebiusElement:
        return MoebiusElement(self.word_matrix(word))

    @cached_property
    def adapted_matrices(self) -> dict[str, np.ndarray]:
        return {n: self.word_matrix(((n, 1),)) for n in self.pants.adapted_names}

    @property
    def adapted_images(self) -> dict[str, MoebiusElement]:
        return {n: MoebiusElement(m) for n, m in self.adapted_matrices.items()}

    @cached_property
    def relation_residual(self) -> float:
        """Largest entrywise gap between the two sides of a defining relation, up to sign.

        Comparing ``lhs`` with ``rhs`` instead of ``lhs rhs^-1`` with the
        identity keeps round-off proportional to the size of one product.
        """
        return relation_residual(self.pants, self.word_matrix)

    def conjugate(self, g: MoebiusElement) -> "SurfaceGroupRep":
        t, ti = g.matrix, g.inverse().matrix
        return SurfaceGroupRep(self.pants, {n: t @ m @ ti for n, m in self.images.items()})

    def with_images(self, images: dict) -> "SurfaceGroupRep":
        merged = dict(self.images)
        for n, m in images.items():
            if n not in merged:
                raise UnknownGenerator(n)
            merged[n] = np.asarray(m.matrix if isinstance(m, MoebiusElement) else m, dtype=CL)
        return SurfaceGroupRep(self.pants, merged)


def relation_residual(P: PantsDecomposition, evaluate) -> float:
    worst = 0.0
    for lhs, rhs in P.relations:
        a, b = evaluate(lhs), evaluate(rhs)
        worst = max(worst, float(min(np.max(np.abs(a - b)), np.max(np.abs(a + b)))))
    return worst


def fn_to_rep(P: PantsDecomposition, fn: FNCoordinates) -> SurfaceGroupRep:
    """Holonomy of the hyperbolic structure with Fenchel-Nielsen coordinates ``fn``.

    Curve ``m`` glued from cuff (P, i) to cuff (Q, j) contributes the gluing
    matrix ``N_{P,i} J D_{t_m} N_{Q,j}^-1``, where ``D_t = diag(e^{t/2}, e^{-t/2})``
    translates by ``t`` along the axis. A complex twist ``t + i w`` adds a
    rotation by ``w`` about the axis of the curve loop, oriented from its
    repelling to its attracting fixed point.
    """
    if len(fn.lengths) != P.n_curves:
        raise ValueError(f"expected {P.n_curves} curves, got {len(fn.lengths)}")
    local, frames = [], []
    for p in range(P.n_pants):
        ls = [fn.lengths[P.cuff_curve(p, k)] for k in range(3)]
        cs = pants_group(*ls)
        local.append(cs)
        frames.append(cuff_frames(cs, ls))

    def gluing(c: Curve) -> np.ndarray:
        (p, i), (q, j) = c.ends
        return frames[p][i] @ J @ _diag(fn.twists[c.index]) @ _inv(frames[q][j])

    placed = {0: np.eye(2, dtype=CL)}
    for p in range(1, P.n_pants):
        f = np.eye(2, dtype=CL)
        for m in P.tree_paths[p]:
            f = f @ gluing(P.curves[m])
        placed[p] = f

    def assemble(frame: np.ndarray) -> dict:
        # work relative to `frame` so no product sees the raw root coordinates
        moved = {p: frame @ f for p, f in placed.items()}
        out = {}
        for p in range(P.n_pants):
            f, fi = moved[p], _inv(moved[p])
            for k in range(3):
                out[f"c{p}.{k}"] = f @ local[p][k] @ fi
        for c in P.curves:
            if not c.in_tree:
                (p, _), (q, _) = c.ends
                out[f"t{c.index}"] = moved[p] @ gluing(c) @ _inv(moved[q])
        return out

    rough = assemble(np.eye(2, dtype=CL))
    b = balancing_frame(m.astype(complex) for m in rough.values())
    images = assemble(_inv(b))
    return SurfaceGroupRep(P, images)


def crossing_data(P: PantsDecomposition, generator, M: Iterable[int]) -> list[tuple[int, int]]:
    """Signed crossings of a generator's loop with the curves in ``M``.

    ``generator`` is an adapted or presentation generator name, or a word.
    The sequence is that of the closed loop: backtracks and the conjugating
    tail of a based loop are cancelled.
    """
    word = ((generator, 1),) if isinstance(generator, str) else tuple(generator)
    seq = P.word_crossings(word)
    gamma = reduce_word(P.expand(word))
    while len(seq) >= 2:
        m0, s0, h0 = seq[0]
        m1, s1, h1 = seq[-1]
        if m0 == m1 and s0 == -s1 and h1 == reduce_word(gamma + h0):
            seq = seq[1:-1]
        else:
            break
    keep = set(M)
    return [(m, s) for m, s, _ in seq if m in keep]


# ---------------------------------------------------------------------------
# characters


@dataclass(frozen=True)
class WordList:
    ident: str
    words: tuple[Word, ...]

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def labels(self) -> list[str]:
        return [word_str(w) for w in self.words]


TRIPLE_WINDOW = 2


def coordinate_words(P: PantsDecomposition) -> WordList:
    """Adapted generators, their ordered pair products, and windowed triple products.

    Generators are ordered ``a0, b0, a1, b1, ...``. Triples ``g_i g_j g_k`` use
    ``i < j < k <= i + 2``. With n = 6g - 6 generators the list has
    n + n(n - 1)/2 + (n - 2) words (25 for genus 2).
    """
    gens = P.adapted_names
    n = len(gens)
    words: list[Word] = [((g, 1),) for g in gens]
    words += [((gens[i], 1), (gens[j], 1)) for i in range(n) for j in range(i + 1, n)]
    words += [
        ((gens[i], 1), (gens[j], 1), (gens[k], 1))
        for i in range(n)
        for j in range(i + 1, n)
        for k in range(j + 1, min(n, i + TRIPLE_WINDOW + 1))
    ]
    return WordList(f"g{P.genus}-{P.template}/v1", tuple(words))


@dataclass(frozen=True, eq=False)
class CharacterVector:
    values: np.ndarray
    words: WordList

    def distance(self, other: "CharacterVector") -> float:
        """Sup-norm distance."""
        return float(np.max(np.abs(self.values - other.values)))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def conj(self) -> "CharacterVector":
        return CharacterVector(np.conj(self.values), self.words)

    def __len__(self):
        return len(self.values)


def character(rep: SurfaceGroupRep, words: WordList | None = None) -> CharacterVector:
    """tr^2 of ``rep`` on every word of ``words`` (default: coordinate words)."""
    if words is None:
        words = coordinate_words(rep.pants)
    adapted = rep.adapted_matrices
    vals = np.empty(len(words), dtype=complex)
    for k, word in enumerate(words):
        m = np.eye(2, dtype=CL)
        for name, e in word:
            g = adapted.get(name)
            if g is None:
                g = rep.word_matrix(((name, 1),))
            m = m @ (g if e == 1 else _inv(g))
        t = m[0, 0] + m[1, 1]
        vals[k] = t * t
    return CharacterVector(vals, words)

"""Deck transformation groups.

Three concrete models ship:

* ``torus``: Z^2 acting on the plane by translations.
* ``klein``: the Klein bottle group generated by the glide reflection
  A(x, y) = (x + 1, -y) and the translation B(x, y) = (x, y + 1), with
  A B A^-1 = B^-1. The pair (m, n) stands for A^m B^n, so that
  A^m B^n (x, y) = (x + m, (-1)^m (y + n)).
* ``sanov``: the free group on g1 = [[1, 2], [0, 1]] and g2 = [[1, 0], [2, 1]]
  acting on the upper half-plane by Moebius maps. Elements are freely
  reduced words; letters a, A, b, B stand for g1, g1^-1, g2, g2^-1.

New groups plug in by subclassing GroupModel and registering in MODELS.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import NamedTuple

import numpy as np

from .errors import IdentityHolonomy, MixedGroups, OrientableGroup
from .geometry import EUCLID, HYPERBOLIC, Direction, Point, hyperbolic_distance, unit


class Box(NamedTuple):
    xmin: float
    ymin: float
    xmax: float
    ymax: float


class Ball(NamedTuple):
    """Closed hyperbolic disc."""

    center: Point
    radius: float


@dataclass(frozen=True)
class DeckElement:
    group: str
    payload: tuple

    def __mul__(self, other: "DeckElement") -> "DeckElement":
        return compose(self, other)

    def __invert__(self) -> "DeckElement":
        return inverse(self)

    def __pow__(self, j: int) -> "DeckElement":
        return MODELS[self.group].power(self, j)

    @property
    def is_identity(self) -> bool:
        return self == MODELS[self.group].identity()

    def __str__(self):
        return MODELS[self.group].format(self.payload)


class GroupModel:
    kind: str = ""
    kernel: str = EUCLID
    orientable: bool = True

    def __repr__(self):
        return f"<GroupModel {self.kind}>"

    def element(self, payload) -> DeckElement:
        return DeckElement(self.kind, tuple(payload))

    def identity(self) -> DeckElement:
        raise NotImplementedError

    def compose(self, T: DeckElement, S: DeckElement) -> DeckElement:
        raise NotImplementedError

    def inverse(self, T: DeckElement) -> DeckElement:
        raise NotImplementedError

    def w(self, T: DeckElement) -> int:
        return 1

    def apply_point(self, T: DeckElement, p) -> Point:
        raise NotImplementedError

    def apply_vector(self, T: DeckElement, p, v) -> Direction:
        raise NotImplementedError

    def power(self, T: DeckElement, j: int) -> DeckElement:
        if j < 0:
            return self.power(self.inverse(T), -j)
        result, base = self.identity(), T
        while j:
            if j & 1:
                result = self.compose(result, base)
            base = self.compose(base, base)
            j >>= 1
        return result

    def cyclic_power(self, T: DeckElement, T0: DeckElement):
        raise NotImplementedError

    def is_reversible(self, T0: DeckElement):
        raise OrientableGroup(f"{self.kind} has trivial orientation character")

    def conjugator_search(self, T, T0, bound: int):
        raise NotImplementedError

    def conjugators(self, T, T0, bound: int) -> list:
        """All conjugators S with S T0 S^-1 = T among elements of size <= bound."""
        return [S for S in self.ball_elements(bound) if self.compose(self.compose(S, T0), self.inverse(S)) == T]

    def ball_elements(self, bound: int) -> list:
        raise NotImplementedError

    def enumerate_overlapping(self, region1, region2, word_bound: int = 6) -> list:
        raise NotImplementedError

    def homology_class(self, T: DeckElement) -> tuple:
        raise NotImplementedError

    def parse(self, obj) -> DeckElement:
        raise NotImplementedError

    def to_json(self, T: DeckElement):
        return list(T.payload)

    def format(self, payload) -> str:
        return "(" + ",".join(str(x) for x in payload) + ")"


def _int_range(lo: float, hi: float, pad: float = 1e-9):
    return range(math.ceil(lo - pad), math.floor(hi + pad) + 1)


def _as_box(region) -> Box:
    if isinstance(region, Ball):
        raise TypeError("Euclidean groups need a Box region")
    return Box(*region)


class _LatticeModel(GroupModel):
    def identity(self):
        return self.element((0, 0))

    def parse(self, obj) -> DeckElement:
        if isinstance(obj, str):
            obj = [p for p in obj.replace("(", "").replace(")", "").split(",")]
        a, b = obj
        if float(a) != int(float(a)) or float(b) != int(float(b)):
            raise ValueError(f"non-integer holonomy {obj!r}")
        return self.element((int(float(a)), int(float(b))))

    def ball_elements(self, bound):
        return [self.element(p) for p in product(range(-bound, bound + 1), repeat=2)]

    def cyclic_power(self, T, T0):
        if T0 == self.identity():
            raise IdentityHolonomy("holonomy is the identity")
        (m, n), (p, q) = T0.payload, T.payload
        num, den = (p, m) if m != 0 else (q, n)
        if num % den:
            return None
        j = num // den
        return j if self.power(T0, j) == T else None


class TorusGroup(_LatticeModel):
    kind = "torus"

    def compose(self, T, S):
        return self.element((T.payload[0] + S.payload[0], T.payload[1] + S.payload[1]))

    def inverse(self, T):
        return self.element((-T.payload[0], -T.payload[1]))

    def power(self, T, j):
        return self.element((j * T.payload[0], j * T.payload[1]))

    def apply_point(self, T, p):
        return Point(p[0] + T.payload[0], p[1] + T.payload[1])

    def apply_vector(self, T, p, v):
        return Direction(v[0], v[1])

    def conjugator_search(self, T, T0, bound=1):
        return self.identity() if T == T0 else None

    def enumerate_overlapping(self, region1, region2, word_bound=6):
        b1, b2 = _as_box(region1), _as_box(region2)
        return [self.element((a, b))
                for a in _int_range(b1.xmin - b2.xmax, b1.xmax - b2.xmin)
                for b in _int_range(b1.ymin - b2.ymax, b1.ymax - b2.ymin)]

    def homology_class(self, T):
        return T.payload


class KleinGroup(_LatticeModel):
    kind = "klein"
    orientable = False

    def compose(self, T, S):
        (m, n), (p, q) = T.payload, S.payload
        return self.element((m + p, (-1) ** (p & 1) * n + q))

    def inverse(self, T):
        m, n = T.payload
        return self.element((-m, -((-1) ** (m & 1)) * n))

    def w(self, T):
        return -1 if T.payload[0] & 1 else 1

    def apply_point(self, T, p):
        m, n = T.payload
        return Point(p[0] + m, (-1) ** (m & 1) * (p[1] + n))

    def apply_vector(self, T, p, v):
        return Direction(v[0], (-1) ** (T.payload[0] & 1) * v[1])

    def is_reversible(self, T0):
        if T0 == self.identity():
            raise IdentityHolonomy("holonomy is the identity")
        m, n = T0.payload
        if m & 1:
            # orientation reversing: T0 centralizes itself
            return True, T0
        if n == 0:
            return True, self.element((1, 0))
        return False, None

    def conjugator_search(self, T, T0, bound=1):
        (m, n), (mt, nt) = T0.payload, T.payload
        if mt != m:
            return None
        if m & 1 == 0:
            S = self.element((0, 0)) if nt == n else self.element((1, 0)) if nt == -n else None
        else:
            S = self.element((0, (n - nt) // 2)) if (n - nt) % 2 == 0 else None
        if S is not None and self.compose(self.compose(S, T0), self.inverse(S)) != T:
            return None
        return S

    def enumerate_overlapping(self, region1, region2, word_bound=6):
        b1, b2 = _as_box(region1), _as_box(region2)
        out = []
        for m in _int_range(b1.xmin - b2.xmax, b1.xmax - b2.xmin):
            if m & 1:
                ns = _int_range(-b2.ymax - b1.ymax, -b2.ymin - b1.ymin)
            else:
                ns = _int_range(b1.ymin - b2.ymax, b1.ymax - b2.ymin)
            out.extend(self.element((m, n)) for n in ns)
        return out

    def homology_class(self, T):
        m, n = T.payload
        return (m, n % 2)


# --- free group on two generators ------------------------------------------

_LETTERS = {"a": 1, "A": -1, "b": 2, "B": -2}
_NAMES = {v: k for k, v in _LETTERS.items()}
_GEN = {1: (1, 2, 0, 1), -1: (1, -2, 0, 1), 2: (1, 0, 2, 1), -2: (1, 0, -2, 1)}


def reduce_word(word) -> tuple:
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert_word(word) -> tuple:
    return tuple(-x for x in reversed(word))


def cyclic_core(word) -> tuple:
    """Split a reduced word as u c u^-1 with c cyclically reduced; return (u, c)."""
    k = 0
    while k < len(word) - 1 - k and word[k] == -word[-1 - k]:
        k += 1
    return word[:k], word[k:len(word) - k]


def _matmul(m1, m2):
    a, b, c, d = m1
    e, f, g, h = m2
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


@lru_cache(maxsize=65536)
def word_matrix(word: tuple) -> tuple:
    m = (1, 0, 0, 1)
    for x in word:
        m = _matmul(m, _GEN[x])
    return m


def mobius(m, z: complex) -> complex:
    a, b, c, d = m
    return (a * z + b) / (c * z + d)


@lru_cache(maxsize=16)
def _words_up_to(bound: int):
    words = [()]
    frontier = [()]
    for _ in range(bound):
        nxt = []
        for w in frontier:
            for x in (1, -1, 2, -2):
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        words.extend(nxt)
        frontier = nxt
    mats = np.array([word_matrix(w) for w in words], dtype=float)
    return words, mats


class SanovGroup(GroupModel):
    kind = "sanov"
    kernel = HYPERBOLIC

    def element(self, payload):
        return DeckElement(self.kind, reduce_word(payload))

    def identity(self):
        return self.element(())

    def compose(self, T, S):
        return self.element(T.payload + S.payload)

    def inverse(self, T):
        return self.element(invert_word(T.payload))

    def power(self, T, j):
        if j < 0:
            return self.power(self.inverse(T), -j)
        return self.element(T.payload * j)

    def matrix(self, T) -> tuple:
        return word_matrix(T.payload)

    def trace(self, T) -> int:
        a, _, _, d = self.matrix(T)
        return a + d

    def apply_point(self, T, p):
        z = mobius(self.matrix(T), complex(p[0], p[1]))
        return Point(z.real, z.imag)

    def apply_vector(self, T, p, v):
        _, _, c, d = self.matrix(T)
        k = 1.0 / (c * complex(p[0], p[1]) + d) ** 2
        z = k * complex(v[0], v[1])
        return unit(z.real, z.imag)

    def cyclic_power(self, T, T0):
        if not T0.payload:
            raise IdentityHolonomy("holonomy is the identity")
        if not T.payload:
            return 0
        u, c = cyclic_core(T0.payload)
        rest = len(T.payload) - 2 * len(u)
        if rest <= 0 or rest % len(c):
            return None
        j = rest // len(c)
        for cand in (j, -j):
            if self.power(T0, cand) == T:
                return cand
        return None

    def conjugator_search(self, T, T0, bound=1):
        u, c = cyclic_core(T0.payload)
        v, d = cyclic_core(T.payload)
        if len(c) != len(d):
            return None
        for k in range(max(len(c), 1)):
            x, y = c[:k], c[k:]
            if y + x == d:
                S = self.element(v + invert_word(x) + invert_word(u))
                if self.compose(self.compose(S, T0), self.inverse(S)) == T:
                    return S
        return None

    def ball_elements(self, bound):
        return [self.element(w) for w in _words_up_to(bound)[0]]

    def enumerate_overlapping(self, region1, region2, word_bound=6):
        b1, b2 = _as_ball(region1), _as_ball(region2)
        words, mats = _words_up_to(word_bound)
        z = complex(*b2.center)
        img = (mats[:, 0] * z + mats[:, 1]) / (mats[:, 2] * z + mats[:, 3])
        c1 = b1.center
        dist = np.arccosh(1.0 + ((img.real - c1[0]) ** 2 + (img.imag - c1[1]) ** 2)
                          / (2.0 * img.imag * c1[1]))
        keep = np.nonzero(dist <= b1.radius + b2.radius + 1e-9)[0]
        return [self.element(words[i]) for i in keep]

    def homology_class(self, T):
        ea = sum(1 if x == 1 else -1 for x in T.payload if abs(x) == 1)
        eb = sum(1 if x == 2 else -1 for x in T.payload if abs(x) == 2)
        return (ea, eb)

    def parse(self, obj) -> DeckElement:
        if not isinstance(obj, str):
            raise ValueError(f"sanov holonomy must be a word string, got {obj!r}")
        s = obj.strip()
        if s in ("", "1", "e"):
            return self.identity()
        try:
            return self.element(_LETTERS[ch] for ch in s if not ch.isspace())
        except KeyError as exc:
            raise ValueError(f"bad letter {exc.args[0]!r} in word {obj!r}") from None

    def to_json(self, T):
        return self.format(T.payload)

    def format(self, payload):
        return "".join(_NAMES[x] for x in payload)


def _as_ball(region) -> Ball:
    if isinstance(region, Ball):
        return region
    # Distance from the box centre is maximized at a corner over the whole box.
    b = Box(*region)
    c = Point(0.5 * (b.xmin + b.xmax), 0.5 * (b.ymin + b.ymax))
    r = max(hyperbolic_distance(c, (x, y)) for x in (b.xmin, b.xmax) for y in (b.ymin, b.ymax))
    return Ball(c, r)


TORUS = TorusGroup()
KLEIN = KleinGroup()
SANOV = SanovGroup()
MODELS = {m.kind: m for m in (TORUS, KLEIN, SANOV)}


def model_of(T: DeckElement) -> GroupModel:
    return MODELS[T.group]


def _same(T, S):
    if T.group != S.group:
        raise MixedGroups(f"{T.group} vs {S.group}")
    return MODELS[T.group]


def compose(T: DeckElement, S: DeckElement) -> DeckElement:
    """T after S."""
    return _same(T, S).compose(T, S)


def inverse(T: DeckElement) -> DeckElement:
    return MODELS[T.group].inverse(T)


def apply_point(T: DeckElement, p) -> Point:
    return MODELS[T.group].apply_point(T, p)


def apply_vector(T: DeckElement, p, v) -> Direction:
    return MODELS[T.group].apply_vector(T, p, v)


def orientation_w(T: DeckElement) -> int:
    return MODELS[T.group].w(T)


def cyclic_power(T: DeckElement, T0: DeckElement):
    return _same(T, T0).cyclic_power(T, T0)


def is_reversible(T0: DeckElement):
    return MODELS[T0.group].is_reversible(T0)


def conjugator_search(T: DeckElement, T0: DeckElement, bound: int = 1):
    return _same(T, T0).conjugator_search(T, T0, bound)


def enumerate_overlapping(model: GroupModel, box1, box2, word_bound: int = 6) -> list:
    if word_bound <= 0:
        return [model.identity()] if model.kernel == HYPERBOLIC else model.enumerate_overlapping(box1, box2, 0)
    return model.enumerate_overlapping(box1, box2, word_bound)


def is_parabolic(T: DeckElement) -> bool:
    return T.group == "sanov" and bool(T.payload) and abs(SANOV.trace(T)) == 2

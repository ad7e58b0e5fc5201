"""Exact Leavitt path algebra arithmetic.

Elements are finite combinations of monomials ``alpha beta*`` with
``r(alpha) == r(beta)``. Products use (CK1); the result is then brought to
the normal form of the special-edge basis: at each regular vertex ``u`` the
lexicographically least edge ``s_u`` is special, and any monomial
``a s_u s_u* b*`` is rewritten as ``a b* - sum_{e != s_u} a e e* b*`` (CK2).
Monomials without such a tail form a basis of L_R(E), so equality of
normal forms is equality in the algebra.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .config import limits
from .errors import (DomainError, GraphConditionError, InternalInconsistencyError,
                     ResourceError)
from .graph import Graph, Path, classify_vertices, paths_from, shift
from .rings import QQ, ZZ, EchelonBasis, Ring, add_into
from .semilinear import length_spectra
from .verdict import InfiniteEmitterWitness, SinkWitness


@dataclass(frozen=True)
class Monomial:
    alpha: Path
    beta: Path

    def __post_init__(self):
        if self.alpha.range != self.beta.range:
            raise DomainError(f"r({self.alpha}) != r({self.beta})")

    def __hash__(self):
        # monomials are dictionary keys everywhere; hashing them is the hot path
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((self.alpha, self.beta))
            object.__setattr__(self, "_hash", h)
            return h

    @property
    def degree(self) -> int:
        return len(self.alpha) - len(self.beta)

    def sort_key(self):
        return (len(self.alpha), self.alpha.edges, self.alpha.source,
                len(self.beta), self.beta.edges, self.beta.source)

    def __str__(self):
        a, b = self.alpha, self.beta
        if not a.edges and not b.edges:
            return str(a.source)
        parts = list(a.edges)
        parts += [f"{e}*" for e in reversed(b.edges)]
        return " ".join(parts)


def monomial_product(m1: Monomial, m2: Monomial):
    """(CK1) product of two monomials; None when it vanishes."""
    a, b = m1.alpha, m1.beta
    c, d = m2.alpha, m2.beta
    if b.is_prefix_of(c):
        return Monomial(a + shift(c, len(b)), d)
    if c.is_prefix_of(b):
        return Monomial(a, d + shift(b, len(c)))
    return None


class LeavittPathAlgebra:
    """L_R(E) for a graph without rays, over an exact ring."""

    def __init__(self, graph: Graph, ring: Ring = ZZ):
        if graph.rays:
            raise DomainError("the symbolic engine needs a graph without rays")
        self.graph = graph
        self.ring = ring
        self._nf_cache: dict = {}

    @cached_property
    def special_edges(self) -> dict:
        cls = classify_vertices(self.graph)
        return {v: self.graph.out_edges(v)[0].id
                for v in self.graph.vertices if v not in cls.singular}

    def element(self, terms) -> "LpaElement":
        acc = {}
        for m, c in dict(terms).items():
            add_into(self.ring, acc, self.normal_form(m), c)
        return LpaElement(self, acc)

    def zero(self) -> "LpaElement":
        return LpaElement(self, {})

    def monomial(self, alpha: Path, beta: Path, coeff=1) -> "LpaElement":
        return self.element({Monomial(alpha, beta): coeff})

    def vertex(self, v) -> "LpaElement":
        if v not in self.graph.vertices:
            raise DomainError(f"unknown vertex {v!r}")
        p = Path.vertex(v)
        return self.monomial(p, p)

    def edge(self, e) -> "LpaElement":
        p = self.graph.path([e])
        return self.monomial(p, Path.vertex(p.range))

    def ghost(self, e) -> "LpaElement":
        p = self.graph.path([e])
        return self.monomial(Path.vertex(p.range), p)

    def path(self, edges, start=None) -> "LpaElement":
        p = self.graph.path(edges, start)
        return self.monomial(p, Path.vertex(p.range))

    def normal_form(self, m: Monomial) -> dict:
        hit = self._nf_cache.get(m)
        if hit is not None:
            return hit
        out = self._reduce(m)
        self._nf_cache[m] = out
        return out

    def _reduce(self, m: Monomial) -> dict:
        a, b = m.alpha, m.beta
        if not a.edges or not b.edges or a.edges[-1] != b.edges[-1]:
            return {m: 1}
        last = a.edges[-1]
        u = self.graph.s(last)
        if self.special_edges.get(u) != last:
            return {m: 1}
        a1, b1 = Path(a.vertices[:-1], a.edges[:-1]), Path(b.vertices[:-1], b.edges[:-1])
        out = dict(self.normal_form(Monomial(a1, b1)))
        for e in self.graph.out_edges(u):
            if e.id != last:
                step = Path((u, e.rng), (e.id,))
                add_into(self.ring, out, {Monomial(a1 + step, b1 + step): 1}, -1)
        return out

    def is_normal(self, m: Monomial) -> bool:
        return self.normal_form(m) == {m: 1}

    def parse(self, text: str) -> "LpaElement":
        return _Parser(self, text).parse()


class LpaElement:
    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: LeavittPathAlgebra, terms: dict):
        self.algebra = algebra
        self.terms = terms

    def _check(self, other):
        if not isinstance(other, LpaElement):
            return False
        if other.algebra is not self.algebra and (
                other.algebra.graph != self.algebra.graph or other.algebra.ring != self.algebra.ring):
            raise DomainError("operands live in different algebras")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        return LpaElement(self.algebra, add_into(self.algebra.ring, dict(self.terms), other.terms))

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        return LpaElement(self.algebra,
                          add_into(self.algebra.ring, dict(self.terms), other.terms, -1))

    def __neg__(self):
        return self.scale(-1)

    def adjoint(self) -> "LpaElement":
        """The involution alpha beta* -> beta alpha*; normal forms stay normal."""
        return LpaElement(self.algebra, {Monomial(m.beta, m.alpha): c for m, c in self.terms.items()})

    def scale(self, c):
        ring = self.algebra.ring
        return LpaElement(self.algebra, add_into(ring, {}, self.terms, ring.normalize(c)))

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if not self._check(other):
            return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, LpaElement):
            return NotImplemented
        self._check(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            body = str(m) if mag == 1 else f"{mag} {m}"
            out.append((sign, body))
        text = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    __repr__ = __str__


def multiply(a: LpaElement, b: LpaElement) -> LpaElement:
    alg = a.algebra
    ring = alg.ring
    acc: dict = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            m = monomial_product(m1, m2)
            if m is not None:
                add_into(ring, acc, alg.normal_form(m), c1 * c2)
    return LpaElement(alg, acc)


def degree(a: LpaElement):
    """Common degree of all terms, or None if zero or inhomogeneous."""
    degs = {m.degree for m in a.terms}
    return degs.pop() if len(degs) == 1 else None


def homogeneous_components(a: LpaElement) -> dict:
    parts: dict = {}
    for m, c in a.terms.items():
        parts.setdefault(m.degree, {})[m] = c
    return {d: LpaElement(a.algebra, t) for d, t in sorted(parts.items())}


# ---------------------------------------------------------------- certificates

@dataclass(frozen=True)
class Certificate:
    vertex: object
    degree: int
    pairs: tuple
    verified: bool = False

    def to_dict(self) -> dict:
        return {"vertex": self.vertex, "degree": self.degree, "verified": self.verified,
                "pairs": [[str(x), str(y)] for x, y in self.pairs]}


def verify_certificate(alg: LeavittPathAlgebra, cert: Certificate) -> bool:
    total = alg.zero()
    for x, y in cert.pairs:
        if x and degree(x) != cert.degree:
            return False
        if y and degree(y) != -cert.degree:
            return False
        total = total + x * y
    return total == alg.vertex(cert.vertex)


def _singular_witness(g: Graph, v):
    if v in g.infinite_emitters:
        return InfiniteEmitterWitness(v)
    return SinkWitness(v)


def _expand(g: Graph, leaves, singular, why):
    """Replace every leaf by its one-edge extensions (one CK2 round)."""
    out = []
    for p in leaves:
        u = p.range
        if u in singular:
            raise GraphConditionError(
                f"cannot expand at singular vertex {u!r} ({why})", _singular_witness(g, u))
        for e in g.out_edges(u):
            out.append(Path(p.vertices + (e.rng,), p.edges + (e.id,)))
    return out


def first_path_into(g: Graph, v, n: int):
    """Lexicographically least path of length ``n`` ending at ``v``, or None."""
    reach = [{v}]
    for _ in range(n):
        reach.append({e.src for w in reach[-1] for e in g.in_edges(w)})
    if not reach[n]:
        return None
    if n == 0:
        return Path.vertex(v)
    # first edge: any edge whose range still reaches v in n-1 steps
    first = min(e.id for e in g.edges if e.rng in reach[n - 1] and e.src in reach[n])
    edges = [first]
    for j in range(n - 2, -1, -1):
        cur = g.r(edges[-1])
        edges.append(min(e.id for e in g.out_edges(cur) if e.rng in reach[j]))
    return g.path(edges)


@lru_cache(maxsize=64)
def _algebra(g: Graph, ring: Ring) -> LeavittPathAlgebra:
    return LeavittPathAlgebra(g, ring)


def unit_factorization_certificate(g: Graph, v, n: int, ring: Ring = ZZ) -> Certificate:
    """Write ``v = sum x_i y_i`` with ``x_i`` of degree ``n`` and ``y_i`` of degree ``-n``.

    n >= 0: ``v = sum_{|mu| = n} mu mu*`` by iterated (CK2).
    n < 0, m = -n: start from the same expansion at depth m; a leaf ``alpha``
    whose range receives a path ``beta`` of length ``|alpha| + m`` yields the
    pair ``(alpha beta*, beta alpha*)`` since ``beta* beta = r(alpha)``;
    other leaves are expanded once more. In a finite graph without singular
    vertices every leaf eventually reaches a vertex fed by a cycle.
    """
    if g.rays:
        raise DomainError("certificates need a finite graph without rays")
    if v not in g.vertices:
        raise DomainError(f"unknown vertex {v!r}")
    alg = _algebra(g, ring)
    singular = classify_vertices(g).singular
    vp = Path.vertex(v)
    pairs = []
    if n == 0:
        pairs.append((alg.vertex(v), alg.vertex(v)))
    elif n > 0:
        leaves = [vp]
        for _ in range(n):
            leaves = _expand(g, leaves, singular, f"degree {n} at {v!r}")
        for mu in sorted(leaves, key=lambda p: p.edges):
            pairs.append((alg.monomial(mu, Path.vertex(mu.range)),
                          alg.monomial(Path.vertex(mu.range), mu)))
    else:
        m = -n
        spectra = length_spectra(g)
        leaves = [vp]
        for _ in range(m):
            leaves = _expand(g, leaves, singular, f"degree {n} at {v!r}")
        cap = len(g.vertices) + m + 1
        done = []
        while leaves:
            pending = []
            for a in sorted(leaves, key=lambda p: p.edges):
                if spectra[a.range].membership(len(a) + m):
                    done.append((a, first_path_into(g, a.range, len(a) + m)))
                else:
                    pending.append(a)
            if pending and len(pending[0]) >= cap:
                raise GraphConditionError(
                    f"no companion path found below depth {cap} at {pending[0].range!r}",
                    _singular_witness(g, pending[0].range))
            leaves = _expand(g, pending, singular, f"degree {n} at {v!r}") if pending else []
        for a, b in sorted(done, key=lambda ab: ab[0].edges):
            pairs.append((alg.monomial(a, b), alg.monomial(b, a)))
    cert = Certificate(v, n, tuple(pairs))
    if not verify_certificate(alg, cert):
        raise InternalInconsistencyError(f"certificate for {v!r} at degree {n} does not verify")
    return Certificate(v, n, cert.pairs, verified=True)


# ---------------------------------------------------------------- span oracles

def _paths_upto(g: Graph, depth: int):
    cap = limits().max_enum
    out = []
    for v in sorted(g.vertices, key=str):
        layer = [Path.vertex(v)]
        for _ in range(depth + 1):
            out.extend(layer)
            if len(out) > cap:
                raise ResourceError(f"more than {cap} paths of length <= {depth}")
            layer = [Path(p.vertices + (e.rng,), p.edges + (e.id,))
                     for p in layer for e in g.out_edges(p.range)]
    return out


def truncated_basis(alg: LeavittPathAlgebra, depth: int, accept) -> list:
    """Normal monomials with |alpha|, |beta| <= depth whose degree passes ``accept``."""
    by_range: dict = {}
    for p in _paths_upto(alg.graph, depth):
        by_range.setdefault(p.range, []).append(p)
    out = []
    for ps in by_range.values():
        for a in ps:
            for b in ps:
                if accept(len(a) - len(b)):
                    m = Monomial(a, b)
                    if alg.is_normal(m):
                        out.append(m)
    return sorted(out, key=Monomial.sort_key)


def _products_span(alg, left, right, basis: EchelonBasis):
    cap = limits().max_enum
    by_source: dict = {}
    for m in right:
        by_source.setdefault(m.alpha.source, []).append(m)
    count = 0
    for m1 in left:
        for m2 in by_source.get(m1.beta.source, ()):
            m = monomial_product(m1, m2)
            if m is None:
                continue
            count += 1
            if count > cap:
                raise ResourceError(f"more than {cap} products in the span oracle")
            basis.add(alg.normal_form(m))
    return basis


def span_equality_oracle(g: Graph, gamma: int, delta: int, depth: int = 6,
                         ring: Ring = QQ) -> bool:
    """Does every truncated basis monomial of degree gamma + delta lie in A_gamma A_delta?

    Both factors range over normal monomials with |alpha|, |beta| <= depth;
    membership is exact linear algebra over the fraction field of ``ring``.
    """
    if depth > limits().max_depth:
        raise ResourceError(f"depth {depth} exceeds the configured maximum {limits().max_depth}")
    alg = LeavittPathAlgebra(g, ring.fraction_field())
    left = truncated_basis(alg, depth, lambda d: d == gamma)
    right = truncated_basis(alg, depth, lambda d: d == delta)
    span = _products_span(alg, left, right, EchelonBasis(alg.ring))
    targets = truncated_basis(alg, depth, lambda d: d == gamma + delta)
    return all(span.contains({t: 1}) for t in targets)


def _lengths_into(g: Graph, bound: int) -> dict:
    """v -> set of n <= bound such that some path of length n ends at v (direct recursion)."""
    reach = {v: {0} for v in g.vertices}
    layer = set(g.vertices)
    for n in range(1, bound + 1):
        layer = {e.rng for e in g.edges if e.src in layer}
        for v in layer:
            reach[v].add(n)
    return reach


def local_unit_span_oracle(g: Graph, n: int, depth: int = 4, ring: Ring = QQ):
    """Z/nZ local-unit test by truncated linear algebra.

    For each class k and vertex v, decide whether v lies in the span of the
    products x y with x = alpha beta* in v A_[k], y = gamma delta* in A_[-k] v
    and all four paths of length at most ``depth``. Returns ``(ok, failure)``
    with ``failure = (v, k)`` or None.

    Only diagonal products mu mu* matter: the (CK2) rewrite sends
    a s s* b* to terms a' b'* with a' = b' exactly when a = b, so normal
    forms never mix diagonal and off-diagonal monomials, and v is diagonal.
    A product is diagonal in two ways. If gamma = beta gamma' then xy =
    (alpha gamma') delta* and we need delta = alpha gamma'; a suitable beta
    exists iff some path of length b <= depth - |gamma'| with
    b = |alpha| - k (mod n) ends at r(alpha). If beta = gamma beta' with
    |beta'| >= 1 then xy = alpha (delta beta')* and we need
    alpha = delta beta'; gamma of length g <= depth - |beta'| with
    g = |delta| - k (mod n) must end at r(delta). Both reduce to a search
    over splittings of a single path mu from v.
    """
    if n < 1:
        raise DomainError("modulus must be at least 1")
    if depth > limits().max_depth:
        raise ResourceError(f"depth {depth} exceeds the configured maximum {limits().max_depth}")
    alg = LeavittPathAlgebra(g, ring.fraction_field())
    into = _lengths_into(g, depth)
    for k in range(n):
        for v in sorted(g.vertices, key=str):
            span = EchelonBasis(alg.ring)
            target = alg.vertex(v).terms
            found = False
            for layer in _path_layers_from(g, v, depth):
                for mu in layer:
                    if _diagonal_product(mu, k, n, depth, into):
                        span.add(alg.normal_form(Monomial(mu, mu)))
                if span.contains(target):
                    found = True
                    break
            if not found:
                return False, (v, k)
    return True, None


def _path_layers_from(g: Graph, v, depth: int):
    layer = [Path.vertex(v)]
    total = 0
    cap = limits().max_enum
    for _ in range(depth + 1):
        total += len(layer)
        if total > cap:
            raise ResourceError(f"more than {cap} paths from {v!r}")
        yield layer
        layer = [Path(p.vertices + (e.rng,), p.edges + (e.id,))
                 for p in layer for e in g.out_edges(p.range)]


def _diagonal_product(mu: Path, k: int, n: int, depth: int, into: dict) -> bool:
    L = len(mu)
    for a in range(L + 1):
        # split mu = alpha gamma' with |alpha| = a
        r_alpha = mu.vertices[a]
        for b in range(depth - (L - a) + 1):
            if (a - b - k) % n == 0 and b in into[r_alpha]:
                return True
        # split mu = delta beta' with |delta| = a and |beta'| >= 1
        if a < L:
            r_delta = mu.vertices[a]
            for gl in range(depth - (L - a) + 1):
                if (a - gl - k) % n == 0 and gl in into[r_delta]:
                    return True
    return False


def local_unit_span_oracle_full(g: Graph, n: int, depth: int = 2, ring: Ring = QQ):
    """Same question as :func:`local_unit_span_oracle`, by enumerating every product."""
    alg = LeavittPathAlgebra(g, ring.fraction_field())
    for k in range(n):
        left_all = truncated_basis(alg, depth, lambda d: d % n == k)
        right_all = truncated_basis(alg, depth, lambda d: d % n == (-k) % n)
        for v in sorted(g.vertices, key=str):
            left = [m for m in left_all if m.alpha.source == v]
            right = [m for m in right_all if m.beta.source == v]
            span = _products_span(alg, left, right, EchelonBasis(alg.ring))
            if not span.contains(alg.vertex(v).terms):
                return False, (v, k)
    return True, None


# ---------------------------------------------------------------- expressions

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_.'\-]*?)(?=[\s+()*]|$)|(\*)|([+\-()]))")


class _Parser:
    """expr := ['-'] term (('+'|'-') term)* ; term := factor+ ; factor := INT | NAME ['*'] | '(' expr ')' ['*']."""

    def __init__(self, alg: LeavittPathAlgebra, text: str):
        self.alg = alg
        self.text = text
        self.tokens = self._lex(text)
        self.pos = 0

    def _lex(self, text):
        out = []
        i = 0
        while i < len(text):
            if text[i].isspace():
                i += 1
                continue
            m = _TOKEN.match(text, i)
            if not m or m.end() == i:
                raise DomainError(f"unexpected character at column {i + 1}: {text[i]!r}")
            num, name, star, op = m.groups()
            if num:
                out.append(("int", int(num), i))
            elif name:
                out.append(("name", name, i))
            elif star:
                out.append(("star", "*", i))
            else:
                out.append(("op", op, i))
            i = m.end()
        return out

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise DomainError("empty expression")
        out = self.expr()
        if self.peek() is not None:
            tok = self.peek()
            raise DomainError(f"unexpected {tok[1]!r} at column {tok[2] + 1}")
        return out

    def expr(self):
        sign = 1
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        total = self.term().scale(sign)
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "+-":
            self.take()
            t = self.term()
            total = total + t if tok[1] == "+" else total - t
        return total

    def term(self):
        factors = []
        while (tok := self.peek()) and not (tok[0] == "op" and tok[1] in "+-)"):
            factors.append(self.factor())
        if not factors:
            tok = self.peek()
            where = f"column {tok[2] + 1}" if tok else "end of input"
            raise DomainError(f"expected a factor at {where}")
        out = factors[0]
        for f in factors[1:]:
            out = out * f
        return out

    def factor(self):
        tok = self.take()
        kind, val, col = tok
        if kind == "int":
            p = [self.alg.vertex(v) for v in self.alg.graph.vertices]
            unit = self.alg.zero()
            for x in p:
                unit = unit + x
            if not self.alg.graph.vertices:
                raise DomainError("integer literal in an empty algebra")
            return unit.scale(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            close = self.take()
            if not close or close[1] != ")":
                raise DomainError(f"unbalanced parenthesis opened at column {col + 1}")
            nxt = self.peek()
            if nxt is not None and nxt[0] == "star" and nxt[2] == close[2] + 1:
                self.take()
                return inner.adjoint()
            return inner
        if kind == "name":
            star = self.peek() is not None and self.peek()[0] == "star" and self.peek()[2] == col + len(val)
            if star:
                self.take()
            g = self.alg.graph
            if val in g.vertices:
                return self.alg.vertex(val)
            if val in g.edge_map:
                return self.alg.ghost(val) if star else self.alg.edge(val)
            raise DomainError(f"unknown name {val!r} at column {col + 1}")
        raise DomainError(f"unexpected {val!r} at column {col + 1}")

"""Exact arithmetic in finitely generated groups given by power-commutator presentations.

A presentation lists an ordered generator basis ``g_1 < ... < g_n`` with
relative orders (positive integer or infinite), power relations
``g_i^{m_i} = w`` for finite-order generators, and conjugation relations
``g_j^{-1} g_l g_j`` and ``g_j g_l g_j^{-1}`` for pairs ``j < l`` (pairs with
no declared relation commute).  Group elements are normal-form exponent
vectors ``(e_1, ..., e_n)`` stored as plain tuples of Python ints, so
exponents never overflow; at finite-order positions ``0 <= e_i < m_i``.

Products are computed by collection from the left.  A fuel bound turns
runaway rewriting on inconsistent user presentations into a reported error
rather than a hang.  Built-in families additionally carry analytic side
tables (abelianization image, membership in the isolator of the derived
subgroup) that higher layers use as independent cross-checks.

Note on the ``torsion_prefix`` keyword: the declared count refers to the
contiguous block of finite-order generators at the *end* of the basis, so
that an element's leading coordinates are its image in the torsion-free
quotient.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

DEFAULT_FUEL = 10**6

Element = tuple  # exponent vector, tuple of int
Word = tuple     # tuple of (generator index, exponent) factors


class PresentationError(ValueError):
    """Invalid presentation source or inconsistent declarations."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CollectionError(RuntimeError):
    """Collection fuel exhausted; the presentation is likely inconsistent."""


# action kinds for moving a generator block left past a higher-index run
_COMMUTE = 0
_SIGN = 1      # g_l g_j g_l^{-1} = g_j^{-1}
_CENTRAL = 2   # g_l g_j g_l^{-1} = g_j * z with z central
_GENERIC = 3


def _word_inverse(word):
    return tuple((i, -e) for i, e in reversed(word))


def _word_letters(word, rep, fuel):
    """Letters of ``word**rep`` as (index, +-1) pairs, charged against fuel."""
    if rep < 0:
        word = _word_inverse(word)
        rep = -rep
    per = sum(abs(e) for _, e in word)
    total = per * rep
    fuel[0] -= total
    if fuel[0] <= 0:
        raise CollectionError("collection fuel exhausted while expanding a relation word")
    block = []
    for i, e in word:
        s = 1 if e > 0 else -1
        block.extend([(i, s)] * abs(e))
    return block * rep


_WORD_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z0-9_']*)(?:\^(-?\d+))?$")


def _parse_word(token, index_of, line):
    """Parse a ``sym^k*sym^k`` word token into a factor tuple."""
    if token == "1":
        return ()
    factors = []
    for part in token.split("*"):
        m = _WORD_FACTOR.match(part)
        if not m:
            raise PresentationError(f"malformed word factor {part!r}", line)
        sym, exp = m.group(1), m.group(2)
        if sym not in index_of:
            raise PresentationError(f"unknown generator {sym!r}", line)
        e = 1 if exp is None else int(exp)
        if e:
            factors.append((index_of[sym], e))
    return tuple(factors)


@dataclass(frozen=True)
class AnalyticTables:
    """Exact family knowledge for built-in groups, used for cross-checks.

    ``ab_image`` maps an element to its coordinates in the free part of the
    abelianization; ``in_sqrt_commutator`` decides membership in the isolator
    of the derived subgroup.
    """

    ab_rank: int
    ab_image: Callable[[Element], tuple]
    in_sqrt_commutator: Callable[[Element], bool]


class PcPresentation:
    """A validated power-commutator presentation with derived collection tables."""

    def __init__(self, *, name, gens, orders, power_words, conj, conjinv,
                 torsion_len, blocks, nilpotent, genset, source,
                 polycyclic_certified=False, family_id=None, analytic=None):
        self.name = name
        self.gens = tuple(gens)
        self.orders = tuple(orders)
        self.n = len(self.gens)
        self.power_words = dict(power_words)
        self.conj = dict(conj)
        self.conjinv = dict(conjinv)
        self.torsion_len = torsion_len
        self.blocks = tuple(tuple(b) for b in blocks) if blocks else ()
        self.nilpotent = nilpotent
        self.genset = tuple(genset)
        self.source = source
        self.polycyclic_certified = polycyclic_certified
        self.family_id = family_id
        self.analytic = analytic
        self._validate()
        self._build_tables()
        self._sample_consistency()

    # -- construction -------------------------------------------------

    def _validate(self):
        n = self.n
        if n == 0:
            raise PresentationError("presentation has no generators")
        if len(set(self.gens)) != n:
            raise PresentationError("duplicate generator symbols")
        for m in self.orders:
            if m is not None and m < 1:
                raise PresentationError("relative orders must be positive")
        if not 0 <= self.torsion_len <= n:
            raise PresentationError("torsion block length out of range")
        for i in range(n - self.torsion_len, n):
            if self.orders[i] is None:
                raise PresentationError(
                    f"torsion block contains infinite-order generator {self.gens[i]!r}")
        for i in range(n - self.torsion_len):
            if self.orders[i] is not None:
                raise PresentationError(
                    f"finite-order generator {self.gens[i]!r} outside the torsion block")
        for i, w in self.power_words.items():
            if self.orders[i] is None:
                raise PresentationError(
                    f"power relation given for infinite-order generator {self.gens[i]!r}")
            self._check_normal_word(w, f"pow {self.gens[i]}")
        seen_pairs = set()
        for table, tag in ((self.conj, "conj"), (self.conjinv, "conjinv")):
            for (l, j), w in table.items():
                if not 0 <= j < l < n:
                    raise PresentationError(
                        f"{tag} must rewrite a later generator by an earlier one")
                self._check_normal_word(w, f"{tag} {self.gens[l]} by {self.gens[j]}")
                seen_pairs.add((l, j))
        for l, j in seen_pairs:
            a = self.conj.get((l, j), ((l, 1),))
            b = self.conjinv.get((l, j), ((l, 1),))
            if (a == ((l, 1),)) != (b == ((l, 1),)):
                raise PresentationError(
                    f"conjugation of {self.gens[l]} by {self.gens[j]} needs both "
                    "directions (conj and conjinv)")
        if self.blocks:
            flat = [i for b in self.blocks for i in b]
            infinite = [i for i in range(n) if self.orders[i] is None]
            if sorted(flat) != infinite or len(set(flat)) != len(flat):
                raise PresentationError(
                    "filtration blocks must partition the infinite-order generators")
        if self.nilpotent and self.blocks:
            for (l, j), w in list(self.conj.items()) + list(self.conjinv.items()):
                if any(i < l for i, _ in w):
                    raise PresentationError(
                        f"conjugate of {self.gens[l]} mentions a generator below it; "
                        "not central-series-adapted")
        for v in self.genset:
            if len(v) != n:
                raise PresentationError("generating-set element has wrong length")
            if all(e == 0 for e in v):
                raise PresentationError("generating set contains the identity")

    def _check_normal_word(self, word, what):
        last = -1
        for i, e in word:
            if not 0 <= i < self.n:
                raise PresentationError(f"{what}: generator index out of range")
            if i <= last:
                raise PresentationError(f"{what}: word is not in normal form (index order)")
            m = self.orders[i]
            if m is not None and not 0 <= e < m:
                raise PresentationError(f"{what}: exponent not reduced mod {m}")
            last = i

    def _build_tables(self):
        n = self.n
        # a generator is inert when it commutes with every generator
        inert = []
        for i in range(n):
            ok = all(self.conj.get((l, i), ((l, 1),)) == ((l, 1),) for l in range(i + 1, n))
            ok = ok and all(
                self.conj.get((i, j), ((i, 1),)) == ((i, 1),) for j in range(i))
            inert.append(ok)
        self._inert = tuple(inert)
        self._fast_reduce = tuple(
            self.orders[i] is None or not self.power_words.get(i)
            for i in range(n))
        self._action_memo = {}
        self._action_progress = set()
        for l in range(n):
            for j in range(l):
                self._get_action(l, j)

    def _get_action(self, l, j):
        """How a g_j block moves left past a g_l run (j < l), derived lazily.

        Uses g_l g_j g_l^{-1} = g_j * w * g_l^{-1} with w the stored conjugate
        of g_l by g_j.  The inverse direction follows algebraically for the
        recognized patterns, so only the positive direction is collected.
        """
        key = (l, j)
        memo = self._action_memo
        if key in memo:
            return memo[key]
        if key in self._action_progress:
            memo[key] = (_GENERIC,)
            return memo[key]
        self._action_progress.add(key)
        try:
            w = self.conj.get((l, j), ((l, 1),))
            fuel = [20000]
            v = [0] * self.n
            self._block_mul(v, j, 1, fuel)
            for i, c in w:
                self._block_mul(v, i, c, fuel)
            self._block_mul(v, l, -1, fuel)
            act = self._classify_action(j, tuple(v))
        except CollectionError:
            act = (_GENERIC,)
        finally:
            self._action_progress.discard(key)
        memo[key] = act
        return act

    def _classify_action(self, j, xp):
        n = self.n
        unit_j = tuple(1 if k == j else 0 for k in range(n))
        if xp == unit_j:
            return (_COMMUTE,)
        if xp == tuple(-1 if k == j else 0 for k in range(n)):
            return (_SIGN,)
        if xp[j] == 1:
            zeta = tuple((k, xp[k]) for k in range(n) if k != j and xp[k])
            if all(self._inert[k] for k, _ in zeta):
                return (_CENTRAL, zeta)
        return (_GENERIC,)

    def _sample_consistency(self):
        """Fuel-bounded smoke checks: conj/conjinv cancel, small products collect."""
        try:
            fuel = [50000]
            for (l, j), w in self.conj.items():
                if w == ((l, 1),):
                    continue
                letters = [(j, 1)]
                letters += _word_letters(w, 1, fuel)
                letters.append((j, -1))
                got = self._letters_to_vector(letters, fuel)
                if got != tuple(1 if k == l else 0 for k in range(self.n)):
                    raise PresentationError(
                        f"conj and conjinv for {self.gens[l]} by {self.gens[j]} "
                        "do not cancel")
            gens = [tuple(1 if k == i else 0 for k in range(self.n))
                    for i in range(self.n)]
            for x in gens:
                for y in gens:
                    self.multiply(self.multiply(x, y), self.inverse(y))
        except CollectionError as exc:
            raise PresentationError(
                f"collection does not terminate on consistency samples: {exc}")

    # -- basics --------------------------------------------------------

    @property
    def identity(self) -> Element:
        return (0,) * self.n

    def generator(self, i) -> Element:
        return tuple(1 if k == i else 0 for k in range(self.n))

    def generator_elements(self):
        return [self.generator(i) for i in range(self.n)]

    def sha256(self) -> str:
        return hashlib.sha256(self.source.encode("utf-8")).hexdigest()

    def element_from_str(self, text) -> Element:
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != self.n:
            raise ValueError(f"expected {self.n} exponents, got {len(parts)}")
        v = tuple(int(p) for p in parts)
        return self.collect_word(tuple((i, e) for i, e in enumerate(v) if e))

    def element_to_str(self, x) -> str:
        return ",".join(str(e) for e in x)

    def format_word(self, x) -> str:
        factors = [f"{self.gens[i]}^{e}" if e != 1 else self.gens[i]
                   for i, e in enumerate(x) if e]
        return "*".join(factors) if factors else "1"

    # -- collection ----------------------------------------------------

    def _letters_to_vector(self, letters, fuel):
        v = [0] * self.n
        self._letter_collect(v, letters, fuel)
        return tuple(v)

    def _letter_collect(self, v, letters, fuel):
        """Reference collector: fold (index, +-1) letters into normal form.

        Slow but assumption-free; the fast path in _block_mul must agree with
        it (cross-checked in the test suite).
        """
        n = self.n
        orders = self.orders
        todo = list(reversed(list(letters)))
        while todo:
            fuel[0] -= 1
            if fuel[0] <= 0:
                raise CollectionError("collection fuel exhausted")
            j, s = todo.pop()
            l = -1
            for i in range(n - 1, j, -1):
                if v[i]:
                    l = i
                    break
            if l < 0:
                e = v[j] + s
                m = orders[j]
                if m is not None and not 0 <= e < m:
                    q, e = divmod(e, m)
                    w = self.power_words.get(j, ())
                    if w and q:
                        todo.extend(reversed(_word_letters(w, q, fuel)))
                v[j] = e
            else:
                e = v[l]
                v[l] = 0
                if s > 0:
                    u = self.conj.get((l, j), ((l, 1),))
                else:
                    u = self.conjinv.get((l, j), ((l, 1),))
                seq = [(j, s)]
                seq.extend(_word_letters(u, e, fuel))
                todo.extend(reversed(seq))

    def collect_word(self, word, fuel=None) -> Element:
        """Normal form of a product of (generator index, exponent) factors."""
        box = [DEFAULT_FUEL if fuel is None else fuel]
        v = list(self.identity)
        for i, e in word:
            self._block_mul(v, i, e, box)
        return tuple(v)

    def _block_mul(self, v, j, f, fuel):
        """Multiply the normal form in ``v`` by ``g_j^f``, in place."""
        if f == 0:
            return
        n = self.n
        fj = f
        corr = None
        fast = self._fast_reduce[j]
        for l in range(n - 1, j, -1):
            e = v[l]
            if not e:
                continue
            a = self._get_action(l, j)
            kind = a[0]
            if kind == _COMMUTE:
                continue
            if kind == _SIGN:
                if e & 1:
                    fj = -fj
            elif kind == _CENTRAL:
                if corr is None:
                    corr = {}
                for idx, coef in a[1]:
                    corr[idx] = corr.get(idx, 0) + coef * e * fj
                    if not self._fast_reduce[idx]:
                        fast = False
            else:
                fast = False
            if not fast:
                break
        if fast:
            e = v[j] + fj
            m = self.orders[j]
            if m is not None:
                e %= m
            v[j] = e
            if corr:
                for idx, val in corr.items():
                    e = v[idx] + val
                    m = self.orders[idx]
                    if m is not None:
                        e %= m
                    v[idx] = e
            return
        s = 1 if f > 0 else -1
        count = abs(f)
        fuel[0] -= count
        if fuel[0] <= 0:
            raise CollectionError("collection fuel exhausted")
        self._letter_collect(v, [(j, s)] * count, fuel)

    # -- group operations ------------------------------------------------

    def multiply(self, x, y) -> Element:
        fuel = [DEFAULT_FUEL]
        v = list(x)
        for j, e in enumerate(y):
            if e:
                self._block_mul(v, j, e, fuel)
        return tuple(v)

    def inverse(self, x) -> Element:
        fuel = [DEFAULT_FUEL]
        v = list(self.identity)
        for j in range(self.n - 1, -1, -1):
            if x[j]:
                self._block_mul(v, j, -x[j], fuel)
        return tuple(v)

    def power(self, x, k) -> Element:
        if k == 0:
            return self.identity
        if k < 0:
            return self.power(self.inverse(x), -k)
        result = self.identity
        base = x
        while k:
            if k & 1:
                result = self.multiply(result, base)
            k >>= 1
            if k:
                base = self.multiply(base, base)
        return result

    def commutator(self, x, y) -> Element:
        xy = self.multiply(x, y)
        return self.multiply(self.multiply(self.inverse(x), self.inverse(y)), xy)

    def conjugate(self, x, g) -> Element:
        return self.multiply(self.multiply(self.inverse(g), x), g)

    def is_central(self, x) -> bool:
        for i in range(self.n):
            g = self.generator(i)
            if self.multiply(x, g) != self.multiply(g, x):
                return False
        return True

    def hirsch_rank(self) -> int:
        if not (self.nilpotent or self.polycyclic_certified):
            raise PresentationError(
                "Hirsch rank needs a nilpotent flag or a polycyclic certification")
        return sum(1 for m in self.orders if m is None)

    def order_of(self, x, bound) -> Optional[int]:
        """Smallest 1 <= k <= bound with x^k = e, or None."""
        acc = x
        for k in range(1, bound + 1):
            if acc == self.identity:
                return k
            acc = self.multiply(acc, x)
        return None

    def __repr__(self):
        return f"PcPresentation({self.name!r}, gens={self.gens})"


# -- parsing -----------------------------------------------------------


def parse_presentation(text, *, family_id=None, analytic=None,
                       polycyclic_certified=False) -> PcPresentation:
    """Parse UTF-8 presentation source (see the grammar in the README)."""
    name = "unnamed"
    nilpotent = False
    torsion_len = 0
    gens = []
    orders = []
    index_of = {}
    power_words = {}
    conj = {}
    conjinv = {}
    blocks = []
    genset_tokens = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        kw = toks[0]
        try:
            if kw == "group":
                if len(toks) != 2:
                    raise PresentationError("usage: group <name>", line_no)
                name = toks[1]
            elif kw == "nilpotent":
                if len(toks) != 2 or toks[1] not in ("true", "false"):
                    raise PresentationError("usage: nilpotent true|false", line_no)
                nilpotent = toks[1] == "true"
            elif kw == "torsion_prefix":
                if len(toks) != 2:
                    raise PresentationError("usage: torsion_prefix <t>", line_no)
                torsion_len = int(toks[1])
            elif kw == "gen":
                if len(toks) != 4 or toks[2] != "order":
                    raise PresentationError("usage: gen <sym> order <m|inf>", line_no)
                sym = toks[1]
                if sym in index_of:
                    raise PresentationError(f"duplicate generator {sym!r}", line_no)
                index_of[sym] = len(gens)
                gens.append(sym)
                orders.append(None if toks[3] == "inf" else int(toks[3]))
            elif kw == "pow":
                if len(toks) != 4 or toks[2] != "=":
                    raise PresentationError("usage: pow <sym> = <word>", line_no)
                i = _req_gen(toks[1], index_of, line_no)
                power_words[i] = _parse_word(toks[3], index_of, line_no)
            elif kw in ("conj", "conjinv"):
                if len(toks) != 6 or toks[2] != "by" or toks[4] != "=":
                    raise PresentationError(f"usage: {kw} <sym> by <sym> = <word>", line_no)
                l = _req_gen(toks[1], index_of, line_no)
                j = _req_gen(toks[3], index_of, line_no)
                if not j < l:
                    raise PresentationError(
                        "conjugation relations rewrite a later generator by an "
                        "earlier one", line_no)
                word = _parse_word(toks[5], index_of, line_no)
                (conj if kw == "conj" else conjinv)[(l, j)] = word
            elif kw == "block":
                idxs = [_req_gen(s, index_of, line_no) for s in toks[1:]]
                if not idxs:
                    raise PresentationError("empty block", line_no)
                blocks.append(tuple(idxs))
            elif kw == "genset":
                genset_tokens.extend((t, line_no) for t in toks[1:])
            else:
                raise PresentationError(f"unknown directive {kw!r}", line_no)
        except ValueError as exc:
            if isinstance(exc, PresentationError):
                raise
            raise PresentationError(str(exc), line_no) from exc

    pres = PcPresentation(
        name=name, gens=gens, orders=orders, power_words=power_words,
        conj=conj, conjinv=conjinv, torsion_len=torsion_len, blocks=blocks,
        nilpotent=nilpotent, genset=(), source=text,
        polycyclic_certified=polycyclic_certified or nilpotent,
        family_id=family_id, analytic=analytic)
    if genset_tokens:
        elements = []
        for tok, line_no in genset_tokens:
            word = _parse_word(tok, index_of, line_no)
            v = pres.collect_word(word)
            if v == pres.identity:
                raise PresentationError("generating set contains the identity", line_no)
            if v not in elements:
                elements.append(v)
        pres.genset = tuple(sorted(elements))
    return pres


def _req_gen(sym, index_of, line_no):
    if sym not in index_of:
        raise PresentationError(f"unknown generator {sym!r}", line_no)
    return index_of[sym]


# -- built-in families ---------------------------------------------------


def _zn_source(n):
    lines = [f"group Z^{n}", "nilpotent true", "torsion_prefix 0"]
    syms = [f"x{i+1}" for i in range(n)]
    lines += [f"gen {s} order inf" for s in syms]
    lines.append("block " + " ".join(syms))
    lines.append("genset " + " ".join(f"{s} {s}^-1" for s in syms))
    return "\n".join(lines) + "\n"


_HEISENBERG_SOURCE = """\
group Heisenberg
nilpotent true
torsion_prefix 0
gen a order inf
gen b order inf
gen c order inf
conj b by a = b*c^-1
conjinv b by a = b*c
block a b
block c
genset a a^-1 b b^-1
"""

_KLEIN_SOURCE = """\
group KleinBottle
nilpotent false
torsion_prefix 0
gen a order inf
gen b order inf
conj b by a = a^-2*b
conjinv b by a = a^2*b
genset a a^-1 b b^-1
"""


def _zn_cross_cyclic_source(n, m):
    lines = [f"group Z^{n}xC{m}", "nilpotent true", "torsion_prefix 1"]
    syms = [f"x{i+1}" for i in range(n)]
    lines += [f"gen {s} order inf" for s in syms]
    lines.append(f"gen t order {m}")
    lines.append("pow t = 1")
    if syms:
        lines.append("block " + " ".join(syms))
    words = [w for s in syms for w in (s, f"{s}^-1")]
    words.append("t")
    if m > 2:
        words.append(f"t^{m-1}")
    lines.append("genset " + " ".join(words))
    return "\n".join(lines) + "\n"


def _zn_analytic(n):
    zero = (0,) * n
    return AnalyticTables(
        ab_rank=n,
        ab_image=lambda x: tuple(x),
        in_sqrt_commutator=lambda x: tuple(x) == zero)


_HEISENBERG_ANALYTIC = AnalyticTables(
    ab_rank=2,
    ab_image=lambda x: (x[0], x[1]),
    in_sqrt_commutator=lambda x: x[0] == 0 and x[1] == 0)

_KLEIN_ANALYTIC = AnalyticTables(
    ab_rank=1,
    ab_image=lambda x: (x[1],),
    in_sqrt_commutator=lambda x: x[1] == 0)


def _zn_cross_cyclic_analytic(n):
    return AnalyticTables(
        ab_rank=n,
        ab_image=lambda x: tuple(x[:n]),
        in_sqrt_commutator=lambda x: all(e == 0 for e in x[:n]))


def _combine_analytic(left, right, nl):
    if left is None or right is None:
        return None
    return AnalyticTables(
        ab_rank=left.ab_rank + right.ab_rank,
        ab_image=lambda x: left.ab_image(x[:nl]) + right.ab_image(x[nl:]),
        in_sqrt_commutator=lambda x: (left.in_sqrt_commutator(x[:nl])
                                      and right.in_sqrt_commutator(x[nl:])))


def direct_product(left, right, name=None) -> PcPresentation:
    """Direct product of two presentations; the torsion block must stay trailing."""
    if isinstance(left, str):
        left = from_id(left)
    if isinstance(right, str):
        right = from_id(right)
    right_all_finite = all(m is not None for m in right.orders)
    if left.torsion_len and not right_all_finite:
        raise PresentationError(
            "direct product would break the trailing torsion block; put the "
            "torsion-free factor first")
    taken = set(left.gens)
    rename = {}
    for s in right.gens:
        new = s
        while new in taken:
            new += "_b"
        rename[s] = new
        taken.add(new)
    nl = left.n
    lines = [f"group {name or left.name + 'x' + right.name}",
             f"nilpotent {'true' if left.nilpotent and right.nilpotent else 'false'}",
             f"torsion_prefix {left.torsion_len + right.torsion_len}"]
    for p, names in ((left, dict(zip(left.gens, left.gens))),
                     (right, rename)):
        for i, s in enumerate(p.gens):
            m = p.orders[i]
            lines.append(f"gen {names[s]} order {'inf' if m is None else m}")
    for p, names, off in ((left, left.gens, 0), (right, [rename[s] for s in right.gens], nl)):
        for i, w in p.power_words.items():
            lines.append(f"pow {names[i]} = {_word_text(w, names)}")
        for (l, j), w in p.conj.items():
            lines.append(f"conj {names[l]} by {names[j]} = {_word_text(w, names)}")
        for (l, j), w in p.conjinv.items():
            lines.append(f"conjinv {names[l]} by {names[j]} = {_word_text(w, names)}")
    for p, names in ((left, left.gens), (right, [rename[s] for s in right.gens])):
        for b in p.blocks:
            lines.append("block " + " ".join(names[i] for i in b))
    words = []
    for v in left.genset:
        words.append(_vector_text(v, left.gens))
    rnames = [rename[s] for s in right.gens]
    for v in right.genset:
        words.append(_vector_text(v, rnames))
    if words:
        lines.append("genset " + " ".join(words))
    src = "\n".join(lines) + "\n"
    fam = f"direct_product({left.family_id},{right.family_id})"
    return parse_presentation(
        src, family_id=fam, polycyclic_certified=True,
        analytic=_combine_analytic(left.analytic, right.analytic, nl))


def _word_text(word, names):
    if not word:
        return "1"
    return "*".join(f"{names[i]}^{e}" if e != 1 else names[i] for i, e in word)


def _vector_text(v, names):
    factors = [(i, e) for i, e in enumerate(v) if e]
    return _word_text(tuple(factors), names)


def builtin(name, **params) -> PcPresentation:
    """Construct a built-in family presentation with its standard generating set."""
    if name == "zn":
        n = params.get("n", 1)
        if not isinstance(n, int) or n < 1:
            raise PresentationError("zn needs n >= 1")
        return parse_presentation(_zn_source(n), family_id=f"zn:{n}",
                                  polycyclic_certified=True, analytic=_zn_analytic(n))
    if name == "heisenberg":
        return parse_presentation(_HEISENBERG_SOURCE, family_id="heisenberg",
                                  polycyclic_certified=True,
                                  analytic=_HEISENBERG_ANALYTIC)
    if name == "klein_bottle":
        return parse_presentation(_KLEIN_SOURCE, family_id="klein_bottle",
                                  polycyclic_certified=True, analytic=_KLEIN_ANALYTIC)
    if name == "zn_cross_cyclic":
        n = params.get("n", 1)
        m = params.get("m", 2)
        if not isinstance(n, int) or n < 0:
            raise PresentationError("zn_cross_cyclic needs n >= 0")
        if not isinstance(m, int) or m < 2:
            raise PresentationError("zn_cross_cyclic needs m >= 2")
        return parse_presentation(
            _zn_cross_cyclic_source(n, m), family_id=f"zn_cross_cyclic:{n},{m}",
            polycyclic_certified=True, analytic=_zn_cross_cyclic_analytic(n))
    if name == "direct_product":
        return direct_product(params["left"], params["right"],
                              name=params.get("name"))
    raise PresentationError(f"unknown built-in family {name!r}")


_ALIASES = {
    "z": ("zn", {"n": 1}),
    "z1": ("zn", {"n": 1}),
    "z2": ("zn", {"n": 2}),
    "z3": ("zn", {"n": 3}),
    "heisenberg": ("heisenberg", {}),
    "klein_bottle": ("klein_bottle", {}),
    "klein": ("klein_bottle", {}),
    "zxz2": ("zn_cross_cyclic", {"n": 1, "m": 2}),
}


def from_id(group_id) -> PcPresentation:
    """Resolve a group id like ``z2``, ``zn:3``, ``zxz2`` or ``heisenberg_z3``."""
    gid = group_id.strip().lower()
    if gid in _ALIASES:
        name, params = _ALIASES[gid]
        return builtin(name, **params)
    if gid.startswith("zn:"):
        return builtin("zn", n=int(gid[3:]))
    if gid.startswith("zn_cross_cyclic:"):
        n, m = gid.split(":", 1)[1].split(",")
        return builtin("zn_cross_cyclic", n=int(n), m=int(m))
    if gid == "heisenberg_z":
        return direct_product(builtin("heisenberg"), builtin("zn", n=1))
    if gid.startswith("heisenberg_z"):
        m = int(gid[len("heisenberg_z"):])
        return direct_product(builtin("heisenberg"),
                              builtin("zn_cross_cyclic", n=0, m=m))
    raise PresentationError(f"unknown group id {group_id!r}")


#: families exercised by the acceptance suites
ACCEPTANCE_FAMILY_IDS = ("z", "z2", "z3", "heisenberg", "klein_bottle",
                         "zxz2", "heisenberg_z3")

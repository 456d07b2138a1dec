"""Brute-force bounded equational closure, used only to validate the engines.

This module is deliberately self-contained: it has its own term encoding and
its own saturation machinery, and must never share code with the rewrite
engines it checks.

Oracle terms are tagged tuples:

    ("c", name)              constant
    ("u", sym, (t1,..,tk))   uninterpreted application
    ("a", sym, (t1,..,tn))   AC application, arguments sorted, same-symbol
                             children flattened away, n >= 2

Abelian-group problems are decided exactly through integer lattice
membership instead of term saturation.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class OracleSig:
    constants: list[str]
    ac: dict[str, dict] = field(default_factory=dict)
    uninterp: dict[str, int] = field(default_factory=dict)

    def prop(self, sym: str, name: str, default=None):
        return self.ac.get(sym, {}).get(name, default)


def oc(name: str):
    return ("c", name)


def ou(sym: str, *args):
    return ("u", sym, tuple(args))


def oa(sym: str, *args, identity: str | None = None):
    """Build an AC application: flatten, sort, collapse singletons."""
    flat = []
    for a in args:
        if a[0] == "a" and a[1] == sym:
            flat.extend(a[2])
        else:
            flat.append(a)
    flat.sort()
    if not flat:
        if identity is None:
            raise ValueError(f"empty {sym} application without identity")
        return ("c", identity)
    if len(flat) == 1:
        return flat[0]
    return ("a", sym, tuple(flat))


def term_size(t) -> int:
    if t[0] == "c":
        return 1
    if t[0] == "u":
        return 1 + sum(term_size(a) for a in t[2])
    return sum(term_size(a) for a in t[2])


def _is_flat(t) -> bool:
    return t[0] == "c" or (t[0] == "a" and all(a[0] == "c" for a in t[2]))


def _subtract(bag: tuple, sub: tuple) -> tuple | None:
    """Multiset difference of sorted tuples; None when sub is not contained."""
    out = list(bag)
    for x in sub:
        try:
            out.remove(x)
        except ValueError:
            return None
    return tuple(out)


class UniverseLimit(Exception):
    pass


class BoundedClosure:
    """Saturated congruence classes over all terms within a size bound.

    ``slack`` enlarges the internal universe beyond the comparison bound so
    that proofs passing through slightly larger terms are still found.
    """

    def __init__(self, eqs, sig: OracleSig, size_bound: int, slack: int = 2,
                 ceiling: int = 120_000, flat_only: bool | None = None):
        self.sig = sig
        self.bound = size_bound
        group_syms = [f for f, p in sig.ac.items() if p.get("group_zero")]
        if group_syms:
            if sig.uninterp or len(sig.ac) > 1:
                raise ValueError("group symbols are only supported in pure group problems")
            self._group = _GroupLattice(eqs, sig, group_syms[0])
            return
        self._group = None
        if flat_only is None:
            # with no uninterpreted symbols and flat inputs, AC symbols only
            # interact through constants, so the flat universe is closed
            flat_only = not sig.uninterp and all(
                _is_flat(side) for s, t in eqs for side in (s, t))
        self._flat = flat_only
        self._terms: list = []
        self._id: dict = {}
        self._parent: list[int] = []
        self._best: list[int] = []        # minimal member (size, term) per root
        self._generate(size_bound + slack, eqs, ceiling)
        self._index()
        for s, t in eqs:
            if term_size(s) > size_bound or term_size(t) > size_bound:
                raise ValueError("equation side exceeds the size bound")
            self._union(self._id[s], self._id[t])
        self._saturate()

    # -- term table -------------------------------------------------------

    def _intern(self, t) -> int:
        i = self._id.get(t)
        if i is None:
            i = len(self._terms)
            self._id[t] = i
            self._terms.append(t)
            self._parent.append(i)
            self._best.append(i)
        return i

    def _generate(self, bound: int, eqs, ceiling: int) -> None:
        sig = self.sig
        by_size: dict[int, list] = {s: [] for s in range(1, bound + 1)}
        for name in sig.constants:
            by_size[1].append(oc(name))
        for s in range(2, bound + 1):
            made = []
            for h, k in sig.uninterp.items():
                for parts in _compositions(s - 1, k):
                    for args in _products([by_size[p] for p in parts]):
                        made.append(("u", h, tuple(args)))
            for f in sig.ac:
                if self._flat:
                    pool = list(by_size[1])
                else:
                    pool = []
                    for p in range(1, s):
                        pool.extend(t for t in by_size[p]
                                    if not (t[0] == "a" and t[1] == f))
                    pool.sort()
                for bag in _bags_of_size(pool, s, 2):
                    made.append(("a", f, tuple(bag)))
            by_size[s] = made
            if sum(len(v) for v in by_size.values()) > ceiling:
                raise UniverseLimit(f"universe exceeds {ceiling} terms at size {s}")
        for s in range(1, bound + 1):
            for t in by_size[s]:
                self._intern(t)
        for s, t in eqs:
            for side in (s, t):
                if side not in self._id:
                    raise ValueError(f"equation term {side!r} outside the universe")

    def _index(self) -> None:
        self._sizes = [term_size(t) for t in self._terms]
        # per AC symbol: term id -> argument bag (ids), and atom -> f-terms with it
        self._bags: dict[str, dict[int, tuple]] = {}
        self._contains: dict[str, dict[int, list[int]]] = {}
        for f in self.sig.ac:
            bags: dict[int, tuple] = {}
            contains: dict[int, list[int]] = {}
            for i, t in enumerate(self._terms):
                if t[0] == "a" and t[1] == f:
                    bag = tuple(sorted(self._id[a] for a in t[2]))
                    bags[i] = bag
                    for a in set(bag):
                        contains.setdefault(a, []).append(i)
            self._bags[f] = bags
            self._contains[f] = contains
        self._ac_lookup: dict[str, dict[tuple, int]] = {
            f: {bag: i for i, bag in bags.items()} for f, bags in self._bags.items()
        }

    # -- union-find -------------------------------------------------------

    def _find(self, x: int) -> int:
        p = self._parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def _union(self, a: int, b: int) -> bool:
        ra, rb = self._find(a), self._find(b)
        if ra == rb:
            return False
        self._parent[ra] = rb
        ba, bb = self._best[ra], self._best[rb]
        if (self._sizes[ba], self._terms[ba]) < (self._sizes[bb], self._terms[bb]):
            self._best[rb] = ba
        return True

    def _bag_of(self, f: str, i: int) -> tuple:
        return self._bags[f].get(i, (i,))

    def _mk(self, f: str, bag: tuple) -> int | None:
        if len(bag) == 1:
            return bag[0]
        if not bag:
            e = self.sig.prop(f, "identity")
            return self._id[oc(e)] if e else None
        return self._ac_lookup[f].get(tuple(sorted(bag)))

    # -- saturation -------------------------------------------------------

    def _theory_pass(self) -> bool:
        changed = False
        for f, props in self.sig.ac.items():
            idem = props.get("idempotent", False)
            nil = props.get("nilpotent_to")
            ident = props.get("identity")
            e_nil = self._id[oc(nil)] if nil else None
            e_id = self._id[oc(ident)] if ident else None
            for w, bag in self._bags[f].items():
                counts: dict[int, int] = {}
                for a in bag:
                    counts[a] = counts.get(a, 0) + 1
                for a, n in counts.items():
                    if idem and n >= 2:
                        w2 = self._mk(f, _subtract(bag, (a,)))
                        if w2 is not None and self._union(w, w2):
                            changed = True
                    if e_nil is not None and n >= 2:
                        rest = _subtract(bag, (a, a))
                        w2 = self._mk(f, tuple(sorted(rest + (e_nil,))))
                        if w2 is not None and self._union(w, w2):
                            changed = True
                    if e_id is not None and a == e_id:
                        w2 = self._mk(f, _subtract(bag, (a,)))
                        if w2 is not None and self._union(w, w2):
                            changed = True
        return changed

    def _congruence_pass(self) -> bool:
        changed = False
        table: dict = {}
        for i, t in enumerate(self._terms):
            if t[0] == "u":
                key = (t[1], tuple(self._find(self._id[a]) for a in t[2]))
                j = table.get(key)
                if j is None:
                    table[key] = i
                elif self._union(i, j):
                    changed = True
        return changed

    def _classes(self) -> dict[int, list[int]]:
        cls: dict[int, list[int]] = {}
        for i in range(len(self._terms)):
            cls.setdefault(self._find(i), []).append(i)
        return cls

    def _replacement_pass(self, classes) -> bool:
        changed = False
        for f in self.sig.ac:
            contains = self._contains[f]
            for root, members in classes.items():
                if len(members) < 2:
                    continue
                rep = self._best[root]
                rb = self._bag_of(f, rep)
                for m in members:
                    if m == rep:
                        continue
                    mb = self._bag_of(f, m)
                    if mb == rb:
                        continue
                    cands = min((contains.get(a, []) for a in set(mb)), key=len)
                    for w in cands:
                        rest = _subtract(self._bags[f][w], mb)
                        if rest is None:
                            continue
                        w2 = self._mk(f, tuple(sorted(rest + rb)))
                        if w2 is not None and self._union(w, w2):
                            changed = True
        return changed

    def _cancel_pass(self, classes) -> bool:
        """Cancel one shared atom at a time; chains reach deeper cancelations.

        All members of a class containing atom a lose one a and merge into a
        single class, which covers every pairwise cancelation transitively.
        """
        changed = False
        for f, props in self.sig.ac.items():
            if not props.get("cancelative"):
                continue
            has_id = props.get("identity") is not None
            for members in classes.values():
                if len(members) < 2:
                    continue
                by_atom: dict[int, list] = {}
                for m in members:
                    bag = self._bag_of(f, m)
                    if len(bag) == 1 and not has_id:
                        continue  # removal would empty this side
                    for a in set(bag):
                        by_atom.setdefault(a, []).append(bag)
                for a, bags in by_atom.items():
                    if len(bags) < 2:
                        continue
                    pivot = None
                    for bag in bags:
                        w = self._mk(f, _subtract(bag, (a,)))
                        if w is None:
                            continue
                        if pivot is None:
                            pivot = w
                        elif self._union(pivot, w):
                            changed = True
        return changed

    def _saturate(self) -> None:
        self._theory_pass()
        while True:
            changed = self._congruence_pass()
            classes = self._classes()
            changed |= self._replacement_pass(classes)
            changed |= self._cancel_pass(classes)
            changed |= self._theory_pass()
            if not changed:
                break

    # -- queries ------------------------------------------------------------

    def equal(self, s, t) -> bool:
        if self._group is not None:
            return self._group.equal(s, t)
        if s == t:
            return True
        si, ti = self._id.get(s), self._id.get(t)
        if si is None or ti is None:
            raise ValueError("term outside the oracle universe")
        return self._find(si) == self._find(ti)

    def classes(self) -> list[list]:
        out = {}
        for i, t in enumerate(self._terms):
            out.setdefault(self._find(i), []).append(t)
        return sorted(sorted(v) for v in out.values())


def bounded_closure(eqs, sig: OracleSig, size_bound: int, slack: int = 2,
                    flat_only: bool | None = None, ceiling: int = 120_000) -> BoundedClosure:
    return BoundedClosure(eqs, sig, size_bound, slack=slack, flat_only=flat_only,
                          ceiling=ceiling)


def oracle_equal(s, t, closure: BoundedClosure) -> bool:
    return closure.equal(s, t)


# -- Abelian groups as integer lattices -------------------------------------


def group_vector(t, sig: OracleSig, sym: str) -> dict[str, int]:
    """Signed constant counts of a pure group term (tagged tuples plus ("n", t))."""
    if t[0] == "c":
        zero = sig.prop(sym, "group_zero")
        return {} if t[1] == zero else {t[1]: 1}
    if t[0] == "n":
        return {c: -k for c, k in group_vector(t[1], sig, sym).items()}
    if t[0] == "a" and t[1] == sym:
        out: dict[str, int] = {}
        for a in t[2]:
            for c, k in group_vector(a, sig, sym).items():
                out[c] = out.get(c, 0) + k
        return {c: k for c, k in out.items() if k}
    raise ValueError(f"not a pure group term: {t!r}")


class _GroupLattice:
    """Exact membership in the lattice spanned by lhs-rhs difference vectors."""

    def __init__(self, eqs, sig: OracleSig, sym: str):
        self.sig = sig
        self.sym = sym
        self.cols = sorted(set(sig.constants) - {sig.prop(sym, "group_zero")})
        rows = []
        for s, t in eqs:
            vs, vt = group_vector(s, sig, sym), group_vector(t, sig, sym)
            rows.append([vs.get(c, 0) - vt.get(c, 0) for c in self.cols])
        self.rows = _integer_echelon(rows)

    def equal(self, s, t) -> bool:
        vs, vt = group_vector(s, self.sig, self.sym), group_vector(t, self.sig, self.sym)
        d = [vs.get(c, 0) - vt.get(c, 0) for c in self.cols]
        return _in_lattice(d, self.rows)


def _integer_echelon(rows: list[list[int]]) -> list[list[int]]:
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    done: list[list[int]] = []
    col = 0
    while rows and col < ncols:
        live = [r for r in rows if r[col] != 0]
        if not live:
            col += 1
            continue
        # combine rows pairwise until a single gcd pivot remains in this column
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            a, b = live[0], live[1]
            q = b[col] // a[col]
            for i in range(ncols):
                b[i] -= q * a[i]
            if b[col] == 0:
                live.pop(1)
                if not any(b):
                    rows = [r for r in rows if r is not b]
        pivot = live[0]
        if pivot[col] < 0:
            for i in range(ncols):
                pivot[i] = -pivot[i]
        for r in rows:
            if r is not pivot and r[col] != 0:
                q = r[col] // pivot[col]
                for i in range(ncols):
                    r[i] -= q * pivot[i]
        done.append(pivot)
        rows = [r for r in rows if r is not pivot and any(r)]
        col += 1
    return done


def _in_lattice(d: list[int], echelon: list[list[int]]) -> bool:
    d = list(d)
    for row in echelon:
        col = next(i for i, v in enumerate(row) if v)
        if d[col] % row[col] == 0:
            q = d[col] // row[col]
            for i in range(len(d)):
                d[i] -= q * row[i]
    return not any(d)


# -- helpers ----------------------------------------------------------------


def _compositions(total: int, k: int):
    """All k-tuples of positive ints summing to total."""
    if k == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - k + 2):
        for rest in _compositions(total - first, k - 1):
            yield (first,) + rest


def _products(pools):
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for rest in _products(pools[1:]):
            yield (head,) + rest


def _bags_of_size(pool_sorted, total: int, min_len: int):
    """Multisets (nondecreasing tuples) from pool with term sizes summing to total."""
    sizes = [term_size(t) for t in pool_sorted]

    def rec(start: int, remaining: int, acc: list):
        if remaining == 0:
            if len(acc) >= min_len:
                yield tuple(acc)
            return
        for idx in range(start, len(pool_sorted)):
            sz = sizes[idx]
            if sz > remaining:
                continue
            acc.append(pool_sorted[idx])
            yield from rec(idx, remaining - sz, acc)
            acc.pop()

    yield from rec(0, total, [])

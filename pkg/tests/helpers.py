"""Shared test data and the acceptance report."""

from cfsubtype.syntax import parse_type

# Tree serialisation types.  The grammar worked example names the leaf
# label Empty; the rest of the examples use Nil.
S_EMPTY = "+{Nil: skip}"
S_FULL_TREE0 = f"+{{Node: {S_EMPTY} ; !int ; {S_EMPTY}}}"
S_FULL_TREE1 = f"+{{Node: ({S_FULL_TREE0} ; !int) ; {S_FULL_TREE0}}}"
S_TREE = "rec s . +{Nil: skip, Node: s ; !int ; s}"


def example_grammar_types():
    """SFullTree0 -> unit and STree -o unit, with the leaf label Empty."""
    empty = "+{Empty: skip}"
    full0 = f"+{{Node: {empty} ; !int ; {empty}}}"
    tree = "rec s . +{Empty: skip, Node: s ; !int ; s}"
    return parse_type(f"{full0} -> unit"), parse_type(f"({tree}) -o unit")


ACCEPTANCE_LINES: list[str] = []


def record_criterion(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


# The worked grammar example, one (lhs, action, rhs) triple per production.
# The range of Y0 is X5 (unit); the printed listing has X4 there, which
# would make the range int.
EXAMPLE_PRODUCTIONS = {
    ("X0", "->d", ("X1",)), ("X0", "->r", ("X5",)),
    ("X1", "+Node", ("X2", "X3", "X2")), ("X1", "+", ("⊥",)),
    ("X2", "+Empty", ()), ("X2", "+", ("⊥",)),
    ("X3", "!p", ("X4", "⊥")), ("X3", "!c", ()),
    ("X4", "int", ()), ("X5", "unit", ()),
    ("Y0", "->d", ("Y1",)), ("Y0", "->r", ("X5",)), ("Y0", "->lin", ()),
    ("Y1", "+", ("⊥",)), ("Y1", "+Empty", ()), ("Y1", "+Node", ("Y1", "X3", "Y1")),
}


def production_triples(g):
    """The grammar's productions as (lhs, action, rhs) triples of display names."""
    return {(g.name(x), str(a), tuple(g.name(y) for y in rhs))
            for x, ps in g.prods.items() for a, rhs in ps.items()}


def find_renaming(ours, theirs, fixed=("⊥",)):
    """A bijection on nonterminal names mapping production set ``ours`` onto
    ``theirs``, or None.  Plain backtracking; fine for small grammars."""
    def symbols(prods):
        out = set()
        for lhs, _, rhs in prods:
            out.add(lhs)
            out.update(rhs)
        return sorted(out)

    ours_syms, theirs_syms = symbols(ours), symbols(theirs)
    if len(ours_syms) != len(theirs_syms) or len(ours) != len(theirs):
        return None
    # Signature: sorted multiset of outgoing actions; a cheap necessary condition.
    def sig(prods, s):
        return sorted(a for lhs, a, _ in prods if lhs == s)

    def consistent(m):
        for lhs, a, rhs in ours:
            if lhs in m and all(y in m for y in rhs):
                if (m[lhs], a, tuple(m[y] for y in rhs)) not in theirs:
                    return False
        return True

    def search(i, m, used):
        if i == len(ours_syms):
            mapped = {(m[l], a, tuple(m[y] for y in r)) for l, a, r in ours}
            return dict(m) if mapped == theirs else None
        s = ours_syms[i]
        cands = [s] if s in fixed else [t for t in theirs_syms if t not in used and t not in fixed]
        for t in cands:
            if sig(ours, s) != sig(theirs, t):
                continue
            m[s] = t
            used.add(t)
            if consistent(m):
                found = search(i + 1, m, used)
                if found:
                    return found
            del m[s]
            used.discard(t)
        return None

    return search(0, {}, set())


def bfs_norm(w, g, limit=64):
    """Length of a shortest path from ``w`` to the empty word, by BFS over the
    grammar's transition system; None if none is found within ``limit`` steps."""
    from collections import deque
    w = tuple(w)
    seen = {w}
    queue = deque([(w, 0)])
    while queue:
        v, d = queue.popleft()
        if not v:
            return d
        if d >= limit:
            continue
        for nxt in g.transitions(v).values():
            if nxt not in seen and len(nxt) <= limit:
                seen.add(nxt)
                queue.append((nxt, d + 1))
    return None


def by_name(g):
    return {g.name(x): x for x in g.nonterminals}

"""Polynomial identity checks over basis tuples.

Multilinear identities (commutativity, associativity) are decided on basis
tuples.  An identity of degree two in one variable is decided on the basis
and on all pair sums ``e_i + e_j`` in that slot, which is the same as
checking its polarization; the alternative and flexible laws are checked
through the polarized associator tensor and then mapped back to a raw
witness.  Power-associativity is exact in degrees 3 and 4 and sampled above.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import scalars as sc
from ._kernels import paired
from .core import Algebra, coerce, multiply, subalgebra_closure
from .errors import VerificationError
from .results import Check

# identity -> (terms, repeated variable); a term is (coefficient, product tree)
IDENTITIES: dict[str, tuple[list, str | None]] = {
    "commutative": ([(1, ("a", "b")), (-1, ("b", "a"))], None),
    "associative": ([(1, (("a", "b"), "c")), (-1, ("a", ("b", "c")))], None),
    "left-alternative": ([(1, (("a", "a"), "b")), (-1, ("a", ("a", "b")))], "a"),
    "right-alternative": ([(1, (("a", "b"), "b")), (-1, ("a", ("b", "b")))], "b"),
    "flexible": ([(1, (("a", "b"), "a")), (-1, ("a", ("b", "a")))], "a"),
    "moufang-1": ([(1, ((("a", "b"), "a"), "c")), (-1, ("a", ("b", ("a", "c"))))], "a"),
    "moufang-2": ([(1, (("a", "b"), ("c", "a"))), (-1, (("a", ("b", "c")), "a"))], "a"),
    "moufang-3": ([(1, ("a", (("b", "c"), "b"))), (-1, ((("a", "b"), "c"), "b"))], "b"),
    "skornyakov-left": ([(1, (("a", ("b", "a")), "c")), (-1, ("a", ("b", ("a", "c"))))], "a"),
    "skornyakov-right": ([(1, ("a", (("b", "c"), "b"))), (-1, ((("a", "b"), "c"), "b"))], "b"),
}

ALIASES = {"leftAlt": "left-alternative", "rightAlt": "right-alternative",
           "left_alternative": "left-alternative", "right_alternative": "right-alternative"}

LINEARIZED = ("commutative", "associative", "flexible", "left-alternative", "right-alternative")


def _variables(tree, acc=None):
    acc = set() if acc is None else acc
    if isinstance(tree, str):
        acc.add(tree)
    else:
        _variables(tree[0], acc)
        _variables(tree[1], acc)
    return acc


def tree_text(tree) -> str:
    if isinstance(tree, str):
        return tree
    left, right = (tree_text(t) for t in tree)
    left = left if isinstance(tree[0], str) else f"({left})"
    right = right if isinstance(tree[1], str) else f"({right})"
    return left + right


def identity_text(name: str) -> str:
    terms, _ = IDENTITIES[name]
    pos = [tree_text(t) for c, t in terms if c > 0]
    neg = [tree_text(t) for c, t in terms if c < 0]
    return " + ".join(pos) + " = " + " + ".join(neg)


def _evaluate(A: Algebra, tree, env):
    if isinstance(tree, str):
        return env[tree]
    return multiply(A, _evaluate(A, tree[0], env), _evaluate(A, tree[1], env))


def raw_defect(A: Algebra, name: str, witness) -> np.ndarray:
    """Left side minus right side of identity ``name`` at ``witness``.

    The witness lists the variables in alphabetical order.
    """
    name = ALIASES.get(name, name)
    terms, _ = IDENTITIES[name]
    names = sorted(set().union(*(_variables(t) for _, t in terms)))
    env = {v: coerce(A, w) for v, w in zip(names, witness)}
    out = A.zero()
    for c, t in terms:
        out = out + A.scalar(c) * _evaluate(A, t, env)
    return out


# ------------------------------------------------------------------ batch evaluation

def _batch_rows(T: np.ndarray, rows) -> np.ndarray:
    if T.dtype == object:
        arr = np.empty((len(rows), T.shape[0]), dtype=object)
        for r, row in enumerate(rows):
            arr[r, :] = [int(v) if not isinstance(v, float) else v for v in row]
        return arr
    return np.array(rows, dtype=T.dtype)


def _eval_batch(tree, env, T, cache):
    if isinstance(tree, str):
        return env[tree]
    if tree in cache:
        return cache[tree]
    L = _eval_batch(tree[0], env, T, cache)
    R = _eval_batch(tree[1], env, T, cache)
    shape = np.broadcast_shapes(L.shape[:-1], R.shape[:-1])
    n = L.shape[-1]
    Lb = np.broadcast_to(L, shape + (n,)).reshape(-1, n)
    Rb = np.broadcast_to(R, shape + (n,)).reshape(-1, n)
    out = paired(Lb, Rb, T).reshape(shape + (T.shape[2],))
    cache[tree] = out
    return out


def _pair_index(n: int):
    return [(i, j) for i in range(n) for j in range(i, n)]


def _pair_element(A: Algebra, i: int, j: int):
    return A.basis(i) if i == j else A.basis(i) + A.basis(j)


def sweep_identity(A: Algebra, name: str) -> Check:
    """Evaluate an identity directly on basis tuples and pair sums.

    The repeated variable runs over ``e_i`` and ``e_i + e_j`` (``i <= j``, in
    lexicographic order) and the others over the basis; the first failing
    tuple in that order is the witness.
    """
    name = ALIASES.get(name, name)
    terms, rep = IDENTITIES[name]
    n = A.dim
    names = sorted(set().union(*(_variables(t) for _, t in terms)))
    order = ([rep] if rep else []) + [v for v in names if v != rep]
    T = A.batch_tensor(depth=4, coeff_bound=2)
    eye = np.eye(n, dtype=np.int64)
    pairs = _pair_index(n)
    env = {}
    for axis, v in enumerate(order):
        if v == rep:
            rows = [eye[i] + (eye[j] if j != i else 0) for i, j in pairs]
        else:
            rows = list(eye)
        arr = _batch_rows(T, rows)
        shape = [1] * len(order) + [n]
        shape[axis] = len(rows)
        env[v] = arr.reshape(shape)
    cache = {}
    D = None
    for c, t in terms:
        val = _eval_batch(t, env, T, cache)
        D = c * val if D is None else D + c * val
    ok = A.batch_zero(D, scale_power=3)
    if bool(np.all(ok)):
        return Check.ok(name)
    idx = tuple(int(v) for v in np.argwhere(~ok)[0])
    env_exact = {}
    for axis, v in enumerate(order):
        if v == rep:
            i, j = pairs[idx[axis]]
            env_exact[v] = _pair_element(A, i, j)
        else:
            env_exact[v] = A.basis(idx[axis])
    witness = tuple(env_exact[v] for v in names)
    if A.is_zero(raw_defect(A, name, witness)):
        raise VerificationError(f"batch defect for {name} not reproduced on its witness")
    return Check.fail(name, witness, identity_text(name))


# ------------------------------------------------------------------ linearized laws

def _polarized(A: Algebra, name: str) -> np.ndarray:
    """Polarized defect tensor indexed ``[i, j, k, :]`` (pair slot first)."""
    As = A.associator_tensor
    if name == "left-alternative":
        return As + As.transpose(1, 0, 2, 3)
    if name == "right-alternative":
        P = As + As.transpose(0, 2, 1, 3)        # [a, b1, b2]
        return P.transpose(1, 2, 0, 3)
    if name == "flexible":
        X = As.transpose(0, 2, 1, 3)             # X[i, j, k] = As[i, k, j]
        return X + X.transpose(1, 0, 2, 3)
    if name == "associative":
        return As
    raise ValueError(name)


def check_linearized_identity(A: Algebra, which: str) -> Check:
    """Decide one of the multilinear or polarized laws exactly.

    Fails carry a raw witness (variables in alphabetical order) and the
    failing basis tuple of the polarized form under ``extra["tuple"]``.
    """
    name = ALIASES.get(which, which)
    if name not in LINEARIZED:
        raise ValueError(f"unknown identity {which!r}; expected one of {LINEARIZED}")
    n = A.dim
    if name == "commutative":
        T = A.batch_tensor(depth=1)
        D = T - T.transpose(1, 0, 2)
        ok = A.batch_zero(D)
        bad = np.argwhere(~ok)
        if not len(bad):
            return Check.ok(name)
        i, j = (int(v) for v in bad[0])
        return Check.fail(name, (A.basis(i), A.basis(j)), identity_text(name), tuple=(i, j))
    D = _polarized(A, name)
    ok = A.batch_zero(D, scale_power=2)
    if name != "associative":
        ok = ok | ~np.triu(np.ones((n, n), bool))[:, :, None]
    bad = np.argwhere(~ok)
    if not len(bad):
        return Check.ok(name)
    i, j, k = (int(v) for v in bad[0])
    if name == "associative":
        witness = (A.basis(i), A.basis(j), A.basis(k))
        return Check.fail(name, witness, identity_text(name), tuple=(i, j, k))
    cands = [A.basis(i)] if i == j else [A.basis(i), A.basis(j), A.basis(i) + A.basis(j)]
    for x in cands:
        witness = (A.basis(k), x) if name == "right-alternative" else (x, A.basis(k))
        if not A.is_zero(raw_defect(A, name, witness)):
            return Check.fail(name, witness, identity_text(name), tuple=(i, j, k))
    raise VerificationError(f"polarized {name} defect has no raw witness")


def check_moufang(A: Algebra) -> Check:
    """All three Moufang identities; the first failure is reported."""
    for name in ("moufang-1", "moufang-2", "moufang-3"):
        c = sweep_identity(A, name)
        if not c.holds:
            return Check.fail("moufang", c.witness, c.detail, identity=name)
    return Check.ok("moufang")


def check_skornyakov(A: Algebra, side: str = "left") -> Check:
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    c = sweep_identity(A, f"skornyakov-{side}")
    return c


# ------------------------------------------------------------------ power-associativity

@lru_cache(maxsize=None)
def parenthesizations(k: int) -> tuple:
    """All product trees with ``k`` leaves ``"a"``; the first is left-normed ``a(a(...))``."""
    if k == 1:
        return ("a",)
    out = []
    for i in range(1, k):
        for L in parenthesizations(i):
            for R in parenthesizations(k - i):
                out.append((L, R))
    ref = left_normed_tree(k)
    out.remove(ref)
    return (ref,) + tuple(out)


def left_normed_tree(k: int):
    t = "a"
    for _ in range(k - 1):
        t = ("a", t)
    return t


def _power_values(X: np.ndarray, T: np.ndarray, max_degree: int):
    values = {"a": X}
    for k in range(2, max_degree + 1):
        for tree in parenthesizations(k):
            values[tree] = paired(values[tree[0]], values[tree[1]], T)
    return values


def _rows_equal(A: Algebra, X, Y) -> np.ndarray:
    if X.dtype == object or np.issubdtype(X.dtype, np.integer):
        return A.batch_zero(X - Y)
    tol = sc.default_tol() if A.tol is None else A.tol
    scale = np.maximum(1.0, np.max(np.abs(Y), axis=-1))
    return np.max(np.abs(X - Y), axis=-1) <= tol * scale


@dataclass(frozen=True)
class PowerAssociativity:
    up_to: int
    method: str
    seed: int | None = None
    samples: int | None = None
    witness: object = None
    trees: tuple = ()
    checked: tuple = field(default_factory=tuple)

    @property
    def method_tag(self) -> str:
        if self.method == "Sampled":
            return f"Sampled(seed={self.seed}, samples={self.samples})"
        return "ExactPolarized"

    def to_dict(self) -> dict:
        out = {"upTo": self.up_to, "method": self.method_tag}
        if self.witness is not None:
            out["witness"] = [sc.format_scalar(v) for v in self.witness]
            out["parenthesizations"] = [tree_text(t) for t in self.trees]
        return out


def _multiset_rows(n: int, degree: int):
    """Coefficient vectors of all sums of at most ``degree`` basis vectors."""
    rows = []
    for k in range(1, degree + 1):
        for combo in itertools.combinations_with_replacement(range(n), k):
            v = [0] * n
            for i in combo:
                v[i] += 1
            rows.append(v)
    return rows


def _first_power_failure(A: Algebra, X, T, degree: int):
    values = _power_values(X, T, degree)
    trees = parenthesizations(degree)
    ref = values[trees[0]]
    for tree in trees[1:]:
        eq = _rows_equal(A, values[tree], ref)
        if not bool(np.all(eq)):
            return int(np.argwhere(~eq)[0][0]), (trees[0], tree)
    return None


def power_associativity_probe(A: Algebra, max_degree: int = 4, seed: int = 0,
                              samples: int = 32) -> PowerAssociativity:
    """Largest degree up to ``max_degree`` at which all parenthesizations agree.

    Degrees 3 and 4 are decided exactly: a homogeneous map of degree ``d``
    vanishes identically iff it vanishes on every sum of at most ``d`` basis
    vectors (its polarization is a signed sum of those values).  Higher
    degrees compare every parenthesization on ``samples`` seeded random
    elements, and the result is tagged accordingly.
    """
    if max_degree < 3:
        raise ValueError("max_degree must be at least 3")
    n = A.dim
    exact_top = min(max_degree, 4)
    T = A.batch_tensor(depth=exact_top - 1, coeff_bound=exact_top)
    rows = _multiset_rows(n, exact_top)
    X = _batch_rows(T, rows)
    for d in range(3, exact_top + 1):
        hit = _first_power_failure(A, X, T, d)
        if hit is not None:
            r, trees = hit
            w = A.element([A.scalar(v) if A.exact else v for v in rows[r]])
            return PowerAssociativity(d - 1, "ExactPolarized", witness=w, trees=trees)
    if max_degree <= 4:
        return PowerAssociativity(max_degree, "ExactPolarized")
    rng = np.random.default_rng(seed)
    if A.exact:
        srows = rng.integers(-3, 4, size=(samples, n)).tolist()
        T = A.batch_tensor(depth=max_degree - 1, coeff_bound=3)
        X = _batch_rows(T, srows)
    else:
        srows = rng.standard_normal((samples, n))
        if sc.is_complex(A.mode):
            srows = srows + 1j * rng.standard_normal((samples, n))
        T = A.batch_tensor()
        X = np.asarray(srows, dtype=T.dtype)
    for d in range(5, max_degree + 1):
        hit = _first_power_failure(A, X, T, d)
        if hit is not None:
            r, trees = hit
            w = A.element(srows[r]) if not A.exact else \
                A.element([A.scalar(int(v)) for v in srows[r]])
            return PowerAssociativity(d - 1, "Sampled", seed, samples, w, trees)
    return PowerAssociativity(max_degree, "Sampled", seed, samples)


def evaluate_power_tree(A: Algebra, a, tree) -> np.ndarray:
    return _evaluate(A, tree, {"a": coerce(A, a)})


# ------------------------------------------------------------------ Artin

def artin_probe(A: Algebra, a, b) -> Check:
    """Associativity of the subalgebra generated by ``a`` and ``b``."""
    basis, sub = subalgebra_closure(A, [a, b])
    if not basis:
        return Check.ok("artin", "generated subalgebra is zero", dim=0)
    c = check_linearized_identity(sub, "associative")
    if c.holds:
        return Check.ok("artin", dim=len(basis))
    lifted = []
    for w in c.witness:
        v = A.zero()
        for coef, bvec in zip(w, basis):
            if coef != 0:
                v = v + coef * bvec
        lifted.append(v)
    return Check.fail("artin", tuple(lifted), "generated subalgebra is not associative",
                      dim=len(basis))


# ------------------------------------------------------------------ report

@dataclass(frozen=True)
class IdentityReport:
    commutative: Check
    associative: Check
    flexible: Check
    left_alternative: Check
    right_alternative: Check
    alternative: Check
    moufang: Check
    skornyakov_left: Check
    skornyakov_right: Check
    power: PowerAssociativity

    def to_dict(self) -> dict:
        return {"commutative": self.commutative.to_dict(),
                "associative": self.associative.to_dict(),
                "flexible": self.flexible.to_dict(),
                "leftAlternative": self.left_alternative.to_dict(),
                "rightAlternative": self.right_alternative.to_dict(),
                "alternative": self.alternative.to_dict(),
                "moufang": self.moufang.to_dict(),
                "skornyakovLeft": self.skornyakov_left.to_dict(),
                "skornyakovRight": self.skornyakov_right.to_dict(),
                "powerAssociativeUpTo": self.power.to_dict()}

    def flag(self, name: str) -> Check:
        key = {"leftAlternative": "left_alternative", "rightAlternative": "right_alternative",
               "left-alternative": "left_alternative", "right-alternative": "right_alternative",
               "skornyakovLeft": "skornyakov_left", "skornyakovRight": "skornyakov_right",
               "skornyakov-left": "skornyakov_left", "skornyakov-right": "skornyakov_right",
               "leftAlt": "left_alternative", "rightAlt": "right_alternative"}.get(name, name)
        return getattr(self, key)


def check_all(A: Algebra, max_degree: int = 4, seed: int = 0, samples: int = 32) -> IdentityReport:
    left = check_linearized_identity(A, "left-alternative")
    right = check_linearized_identity(A, "right-alternative")
    if left.holds and right.holds:
        alt = Check.ok("alternative")
    else:
        first = left if not left.holds else right
        alt = Check.fail("alternative", first.witness, first.detail, via=first.label)
    return IdentityReport(
        commutative=check_linearized_identity(A, "commutative"),
        associative=check_linearized_identity(A, "associative"),
        flexible=check_linearized_identity(A, "flexible"),
        left_alternative=left,
        right_alternative=right,
        alternative=alt,
        moufang=check_moufang(A),
        skornyakov_left=check_skornyakov(A, "left"),
        skornyakov_right=check_skornyakov(A, "right"),
        power=power_associativity_probe(A, max_degree, seed, samples),
    )

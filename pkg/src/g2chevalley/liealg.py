"""Chevalley basis of the 14-dimensional Lie algebra of type G2 over Z.

The basis is ordered h_{a1}, h_{a2}, then root vectors for the six
positive roots in listing order, then their negatives in matching order.
Structure constants are solved over Z from extraspecial-pair seeds and
Jacobi propagation, then verified exhaustively; optional diagonal +-1
rescalings of the positive root vectors give the calibration freedom.
"""

from __future__ import annotations

from .errors import InconsistentSigns, NoCalibrationFound
from .rootsys import (
    A1,
    A2,
    Root,
    add_roots,
    all_roots,
    cartan_integer,
    positive_roots,
    root_index,
    root_string,
)

DIM = 14

_SIMPLES = (A1, A2)


def basis_index(r: Root) -> int:
    """Index of the root vector x_r in the 14-element basis."""
    return 2 + root_index(r)


def coroot_coords(r: Root) -> tuple[int, int]:
    """The coroot of r written in the basis of simple coroots."""
    if r.long:
        return (r.a // 3, r.b)
    return (r.a, 3 * r.b)


def _summing_pairs():
    out = []
    for x in all_roots():
        for y in all_roots():
            if add_roots(x, y) is not None:
                out.append((x, y))
    return out


def structure_magnitudes() -> dict:
    """|N_{x,y}| = p + 1 from the x-string through y, for all summing pairs."""
    return {
        (x, y): root_string(y, x)[0] + 1 for (x, y) in _summing_pairs()
    }


def extraspecial_pairs():
    """For each non-simple positive root, the decomposition with minimal
    first summand in the listing order."""
    pos = positive_roots()
    out = []
    for gamma in pos[2:]:
        for alpha in pos:
            rest = (gamma.a - alpha.a, gamma.b - alpha.b)
            if rest in [(r.a, r.b) for r in pos]:
                out.append((alpha, Root(*rest)))
                break
    return out


def _pairing_with_h(x: Root, h_coords) -> int:
    """Eigenvalue of x under an element of the Cartan with the given
    simple-coroot coordinates."""
    return h_coords[0] * cartan_integer(x, A1) + h_coords[1] * cartan_integer(x, A2)


def _solve_signs():
    """Determine all structure constants N_{x,y} over Z.

    Seeds the extraspecial pairs with +(p+1) and closes under
    antisymmetry, the negation rule, the zero-sum coroot relation and
    single-unknown Jacobi instances.
    """
    mags = structure_magnitudes()
    pairs = list(mags)
    nconst: dict = {}

    def put(x, y, v):
        for a, b, w in ((x, y, v), (y, x, -v), (-x, -y, -v), (-y, -x, v)):
            old = nconst.get((a, b))
            if old is None:
                nconst[(a, b)] = w
            elif old != w:
                raise ArithmeticError(f"sign clash at ({a}, {b})")

    for alpha, beta in extraspecial_pairs():
        put(alpha, beta, mags[(alpha, beta)])

    def zero_sum_pass():
        progress = False
        for x, y in list(nconst):
            z = Root(-(x.a + y.a), -(x.b + y.b))
            if (y, z) in nconst and (z, x) in nconst:
                continue
            # N(y,z) h_x + N(z,x) h_y + N(x,y) h_z = 0
            hx, hy, hz = coroot_coords(x), coroot_coords(y), coroot_coords(z)
            n = nconst[(x, y)]
            det = hx[0] * hy[1] - hx[1] * hy[0]
            r0, r1 = -n * hz[0], -n * hz[1]
            u_num = r0 * hy[1] - r1 * hy[0]
            v_num = hx[0] * r1 - hx[1] * r0
            if det == 0 or u_num % det or v_num % det:
                raise ArithmeticError("zero-sum relation is not solvable")
            put(y, z, u_num // det)
            put(z, x, v_num // det)
            progress = True
        return progress

    def affine_bracket_with_root(vec, w):
        """Bracket an affine combination of root vectors with x_w.

        vec maps basis indices of root vectors to (const, lin) pairs;
        returns the same shape or None when an unknown constant occurs.
        """
        roots = all_roots()
        out = {}

        def bump(idx, c0, c1):
            a, b = out.get(idx, (0, 0))
            out[idx] = (a + c0, b + c1)

        for idx, (c0, c1) in vec.items():
            r = roots[idx - 2]
            if r == -w:
                hc = coroot_coords(r)
                # [x_r, x_{-r}] = h_r, with [h, .] handled by callers; here
                # the bracket target is the Cartan, tracked on indices 0, 1.
                bump(0, c0 * hc[0], c1 * hc[0])
                bump(1, c0 * hc[1], c1 * hc[1])
                continue
            s = add_roots(r, w)
            if s is None:
                continue
            n = nconst.get((r, w))
            if n is None:
                return None
            bump(basis_index(s), c0 * n, c1 * n)
        return out

    def jacobi_try(x, y, w):
        """Affine Jacobi residual for [[x,y],w] + [[y,w],x] + [[w,x],y]
        with N(x,y) as the single unknown; None when underdetermined."""
        total = {}

        def accumulate(vec):
            for idx, (c0, c1) in vec.items():
                a, b = total.get(idx, (0, 0))
                total[idx] = (a + c0, b + c1)

        s_xy = add_roots(x, y)
        vec1 = affine_bracket_with_root({basis_index(s_xy): (0, 1)}, w)
        if vec1 is None:
            return None
        accumulate(vec1)

        for first, second, third in ((y, w, x), (w, x, y)):
            s = add_roots(first, second)
            if s is None:
                inner = None
            else:
                n = nconst.get((first, second))
                if n is None:
                    return None
                inner = (s, n)
            if inner is None:
                # [x_first, x_second] may still be a Cartan element.
                if (first.a + second.a, first.b + second.b) == (0, 0):
                    hc = coroot_coords(first)
                    c = _pairing_with_h(third, hc)
                    idx = basis_index(third)
                    a, b = total.get(idx, (0, 0))
                    total[idx] = (a + c, b)
                continue
            s, n = inner
            vec = affine_bracket_with_root({basis_index(s): (n, 0)}, third)
            if vec is None:
                return None
            accumulate(vec)
        return total

    def jacobi_pass():
        progress = False
        todo = [p for p in pairs if p not in nconst]
        for x, y in todo:
            if (x, y) in nconst:
                continue
            for w in all_roots():
                if w in (x, y, -x, -y):
                    continue
                res = jacobi_try(x, y, w)
                if res is None:
                    continue
                s_val = None
                for idx, (c0, c1) in res.items():
                    if c1:
                        if c0 % c1:
                            raise ArithmeticError("non-integral Jacobi solve")
                        s_val = -c0 // c1
                        break
                if s_val is None:
                    continue
                for idx, (c0, c1) in res.items():
                    if c0 + s_val * c1 != 0:
                        raise ArithmeticError("overdetermined Jacobi clash")
                put(x, y, s_val)
                progress = True
                break
        return progress

    while any(p not in nconst for p in pairs):
        if zero_sum_pass():
            continue
        if not jacobi_pass():
            missing = [p for p in pairs if p not in nconst][:3]
            raise ArithmeticError(f"sign propagation stalled at {missing}")
    return nconst


class StructureTable:
    """Structure constants and adjoint matrices of the Chevalley basis."""

    def __init__(self, nconst, flips=None, verified=True):
        self.nconst = nconst
        self.flips = flips
        self._ad = {}
        self._powers = {}
        self.verified = verified

    # -- table data ------------------------------------------------------

    def n(self, x: Root, y: Root) -> int:
        return self.nconst[(x, y)]

    def hbracket(self, r: Root) -> tuple[int, int]:
        """[x_r, x_{-r}] written in the simple-coroot basis."""
        return coroot_coords(r)

    def coroot_pairing(self, r: Root, i: int) -> int:
        """[h_i, x_r] = <r, a_i> x_r for the i-th simple root."""
        return cartan_integer(r, _SIMPLES[i])

    def bracket_vec(self, i: int, j: int) -> dict:
        """Bracket of basis elements i, j as a sparse coefficient vector."""
        roots = all_roots()
        if i < 2 and j < 2:
            return {}
        if i < 2:
            r = roots[j - 2]
            c = self.coroot_pairing(r, i)
            return {j: c} if c else {}
        if j < 2:
            r = roots[i - 2]
            c = -self.coroot_pairing(r, j)
            return {i: c} if c else {}
        x, y = roots[i - 2], roots[j - 2]
        if y == -x:
            h = coroot_coords(x)
            return {k: h[k] for k in (0, 1) if h[k]}
        s = add_roots(x, y)
        if s is None:
            return {}
        n = self.nconst[(x, y)]
        return {basis_index(s): n} if n else {}

    def bracket_apply(self, i: int, vec: dict) -> dict:
        """[basis_i, v] for a sparse coefficient vector v."""
        out = {}
        for j, c in vec.items():
            for k, n in self.bracket_vec(i, j).items():
                out[k] = out.get(k, 0) + c * n
        return {k: v for k, v in out.items() if v}

    # -- adjoint matrices --------------------------------------------------

    def ad_matrix(self, r: Root):
        """The 14x14 integer matrix of ad x_r in the canonical basis."""
        if r not in self._ad:
            i = basis_index(r)
            cols = [self.bracket_vec(i, j) for j in range(DIM)]
            self._ad[r] = tuple(
                tuple(cols[j].get(k, 0) for j in range(DIM))
                for k in range(DIM)
            )
        return self._ad[r]

    def unipotent_data(self, r: Root):
        """(X, X^2/2, X^3/6 or None) as exact integer matrices."""
        if r not in self._powers:
            x = self.ad_matrix(r)
            x2 = _imat_mul(x, x)
            x3 = _imat_mul(x2, x)
            x4 = _imat_mul(x3, x)
            if any(any(row) for row in x4):
                raise ArithmeticError(f"ad x_{r} is not nilpotent of degree 4")
            if r.long and any(any(row) for row in x3):
                raise ArithmeticError(f"ad x_{r} (long) is not cubed to zero")
            x2h = _imat_div(x2, 2)
            x3s = None if r.long else _imat_div(x3, 6)
            self._powers[r] = (x, x2h, x3s)
        return self._powers[r]

    # -- rescaling ---------------------------------------------------------

    def with_flips(self, flips) -> "StructureTable":
        """Rescale the positive root vectors by +-1 (negatives follow)."""
        flips = tuple(flips)
        if len(flips) != 6 or any(f not in (1, -1) for f in flips):
            raise InconsistentSigns("flip vector must be six signs")
        pos = positive_roots()
        sign = {}
        for r, f in zip(pos, flips):
            sign[r] = f
            sign[-r] = f
        mags = structure_magnitudes()
        nconst = {}
        for (x, y), n in self.nconst.items():
            m = sign[x] * sign[y] * sign[add_roots(x, y)] * n
            if abs(m) != mags[(x, y)]:
                raise InconsistentSigns(f"|N| broken at ({x}, {y})")
            nconst[(x, y)] = m
        return StructureTable(nconst, flips=flips)

    def mutated(self, pair) -> "StructureTable":
        """A copy with one structure constant's sign flipped and no
        consistency repair; used as a negative-control fixture."""
        nconst = dict(self.nconst)
        nconst[pair] = -nconst[pair]
        return StructureTable(nconst, flips=self.flips, verified=False)

    # -- verification --------------------------------------------------------

    def check_magnitudes(self):
        """|N| = p + 1 and the antisymmetry/negation rules; raises on failure."""
        mags = structure_magnitudes()
        for pair, m in mags.items():
            if pair not in self.nconst:
                raise ArithmeticError(f"missing constant for {pair}")
            if abs(self.nconst[pair]) != m:
                raise ArithmeticError(f"|N{pair}| != {m}")
        for (x, y), n in self.nconst.items():
            if self.nconst[(y, x)] != -n:
                raise ArithmeticError(f"antisymmetry fails at ({x}, {y})")
            if self.nconst[(-x, -y)] != -n:
                raise ArithmeticError(f"negation rule fails at ({x}, {y})")

    def jacobi_failures(self, limit=1):
        """Basis triples violating the Jacobi identity, up to `limit`."""
        bad = []
        for i in range(DIM):
            for j in range(DIM):
                for k in range(DIM):
                    total = {}
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        inner = self.bracket_vec(a, b)
                        for idx, v in self.bracket_apply_outer(inner, c).items():
                            total[idx] = total.get(idx, 0) + v
                    if any(total.values()):
                        bad.append((i, j, k))
                        if len(bad) >= limit:
                            return bad
        return bad

    def bracket_apply_outer(self, vec: dict, c: int) -> dict:
        """[v, basis_c] for a sparse vector v."""
        out = {}
        for j, coeff in vec.items():
            for k, n in self.bracket_vec(j, c).items():
                out[k] = out.get(k, 0) + coeff * n
        return {k: v for k, v in out.items() if v}


def _imat_mul(a, b):
    n = len(a)
    bt = list(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def _imat_div(a, d):
    out = []
    for row in a:
        new = []
        for x in row:
            q, r = divmod(x, d)
            if r:
                raise ArithmeticError(f"entry {x} not divisible by {d}")
            new.append(q)
        out.append(tuple(new))
    return tuple(out)


_DEFAULT: StructureTable | None = None
_CALIBRATED: StructureTable | None = None


def build_structure_table(sign_flips=None) -> StructureTable:
    """Construct (and fully verify) the structure table; optionally apply
    a +-1 rescaling of the positive root vectors afterwards."""
    global _DEFAULT
    if _DEFAULT is None:
        table = StructureTable(_solve_signs())
        table.check_magnitudes()
        bad = table.jacobi_failures()
        if bad:
            raise ArithmeticError(f"Jacobi identity fails at {bad[0]}")
        _DEFAULT = table
    if sign_flips is None:
        return _DEFAULT
    return _DEFAULT.with_flips(sign_flips)


def ad_matrix(table: StructureTable, r: Root):
    return table.ad_matrix(r)


def calibrate_signs(table: StructureTable):
    """Search the 64 diagonal rescalings for one under which the five
    standard commutator formulas hold with their printed signs.

    Returns the flip vector.  Raises NoCalibrationFound with the residual
    mismatch report when no rescaling works.
    """
    from . import relations  # deferred: relations builds on group/liealg

    candidates = [()]
    for _ in range(6):
        candidates = [c + (s,) for c in candidates for s in (1, -1)]
    for flips in candidates:
        cand = table.with_flips(flips)
        if relations.r2_numeric_probe(cand):
            report = relations.verify_R2(cand)
            if report.ok:
                return flips
    residual = relations.verify_R2(table)
    raise NoCalibrationFound(residual)


def calibrated_table() -> StructureTable:
    """The structure table rescaled so the printed commutator formulas
    hold verbatim; cached per process."""
    global _CALIBRATED
    if _CALIBRATED is None:
        base = build_structure_table()
        flips = calibrate_signs(base)
        _CALIBRATED = base.with_flips(flips)
    return _CALIBRATED

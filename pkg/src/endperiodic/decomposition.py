"""Rectangle strip decompositions and the piece map.

Each index k gets a rectangle Q_k of width omega_k and height eta_k
(Perron left/right eigenvector entries). Q_k is cut into one vertical strip
per arc counted by column k of the matrix and one horizontal strip per arc
counted by row k. The piece map sends each vertical strip affinely onto a
horizontal strip, stretching horizontally by lambda and contracting
vertically by 1/lambda.

Charts are per rectangle: origin at the top-left corner, x rightward in
[0, omega_k], y downward in [0, eta_k]. Strip boundary offsets are stored
symbolically (integer combinations of lambda^-1 * omega_i or
lambda^-1 * eta_i) so coincidences can be decided exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidInputError, PreconditionError
from .spectral import IntMatrix, PerronData, is_irreducible

VERTICAL = "V"
HORIZONTAL = "H"


@dataclass(frozen=True, order=True)
class StripLabel:
    """Strip V^(k)_{i,j} (orientation V) or H^(k)_{i,j} (orientation H).

    ``rect`` is the host rectangle k, ``source`` the index i, ``copy`` the
    duplicate number j. All indices are 1-based.
    """

    orientation: str
    rect: int
    source: int
    copy: int

    def __str__(self):
        return f"{self.orientation}({self.rect};{self.source},{self.copy})"


def _validate_label(label: StripLabel, M: IntMatrix) -> None:
    n = M.n
    k, i, j = label.rect, label.source, label.copy
    if label.orientation not in (VERTICAL, HORIZONTAL):
        raise InvalidInputError(f"bad orientation {label.orientation!r}")
    if not (1 <= k <= n and 1 <= i <= n and j >= 1):
        raise InvalidInputError(f"label {label} out of range")
    bound = M[i - 1, k - 1] if label.orientation == VERTICAL else M[k - 1, i - 1]
    if j > bound:
        raise InvalidInputError(f"label {label} exceeds multiplicity {bound}")


@dataclass(frozen=True)
class SymbolicLength:
    """Length of the form lambda^-1 * sum_i c_i * basis_i with integer c_i.

    ``scale_kind`` selects the basis: "W" for the width entries omega_i,
    "H" for the height entries eta_i.
    """

    coefficients: tuple[int, ...]
    scale_kind: str

    def __add__(self, other: "SymbolicLength") -> "SymbolicLength":
        if self.scale_kind != other.scale_kind:
            raise InvalidInputError("cannot add lengths over different bases")
        return SymbolicLength(
            tuple(a + b for a, b in zip(self.coefficients, other.coefficients)),
            self.scale_kind,
        )

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    def evaluate(self, eigen: PerronData) -> float:
        return evaluate_length(self, eigen)

    @classmethod
    def unit(cls, n: int, i: int, scale_kind: str) -> "SymbolicLength":
        """lambda^-1 * basis_i (1-based i)."""
        return cls(tuple(1 if t == i - 1 else 0 for t in range(n)), scale_kind)

    @classmethod
    def zero(cls, n: int, scale_kind: str) -> "SymbolicLength":
        return cls((0,) * n, scale_kind)


def evaluate_length(length: SymbolicLength, eigen: PerronData) -> float:
    basis = eigen.omega if length.scale_kind == "W" else eigen.eta
    return sum(c * b for c, b in zip(length.coefficients, basis)) / eigen.lam


@dataclass(frozen=True)
class StripDecomposition:
    """Strip partition of every rectangle, with the bijections sigma and tau.

    ``vertical_order[k]`` lists Q_k's vertical strips left to right,
    ``horizontal_order[k]`` its horizontal strips top to bottom; both use the
    canonical order (source ascending, then copy ascending). ``tau[k]``
    permutes vertical labels of Q_k and ``sigma[k]`` horizontal labels;
    widths and heights follow the resizing rule: the strip at label B has
    width lambda^-1 * omega_{source(tau_k(B))}, the strip at label C has
    height lambda^-1 * eta_{source(sigma_k^-1(C))}.
    """

    matrix: IntMatrix
    eigen: PerronData
    vertical_order: dict[int, tuple[StripLabel, ...]]
    horizontal_order: dict[int, tuple[StripLabel, ...]]
    sigma: dict[int, dict[StripLabel, StripLabel]]
    tau: dict[int, dict[StripLabel, StripLabel]]
    vertical_boundaries: dict[int, tuple[SymbolicLength, ...]] = field(repr=False)
    horizontal_boundaries: dict[int, tuple[SymbolicLength, ...]] = field(repr=False)

    @property
    def n(self) -> int:
        return self.matrix.n

    def rect_width(self, k: int) -> float:
        return self.eigen.omega[k - 1]

    def rect_height(self, k: int) -> float:
        return self.eigen.eta[k - 1]

    def sigma_inv(self, k: int) -> dict[StripLabel, StripLabel]:
        return {v: u for u, v in self.sigma[k].items()}

    def tau_inv(self, k: int) -> dict[StripLabel, StripLabel]:
        return {v: u for u, v in self.tau[k].items()}

    def strip_width(self, label: StripLabel) -> SymbolicLength:
        if label.orientation != VERTICAL:
            raise InvalidInputError("strip_width expects a vertical label")
        image = self.tau[label.rect][label]
        return SymbolicLength.unit(self.n, image.source, "W")

    def strip_height(self, label: StripLabel) -> SymbolicLength:
        if label.orientation != HORIZONTAL:
            raise InvalidInputError("strip_height expects a horizontal label")
        preimage = self.sigma_inv(label.rect)[label]
        return SymbolicLength.unit(self.n, preimage.source, "H")

    def strip_span(self, label: StripLabel) -> tuple[SymbolicLength, SymbolicLength]:
        """Symbolic (start, end) offsets of the strip inside its rectangle."""
        if label.orientation == VERTICAL:
            order = self.vertical_order[label.rect]
            bounds = self.vertical_boundaries[label.rect]
        else:
            order = self.horizontal_order[label.rect]
            bounds = self.horizontal_boundaries[label.rect]
        t = order.index(label)
        return bounds[t], bounds[t + 1]

    def strip_interval(self, label: StripLabel) -> tuple[float, float]:
        a, b = self.strip_span(label)
        return a.evaluate(self.eigen), b.evaluate(self.eigen)

    def to_json_dict(self) -> dict:
        def perm(d):
            return [[str(a), str(b)] for a, b in sorted(d.items())]

        return {
            "matrix": self.matrix.to_lists(),
            "eigen": self.eigen.to_json_dict(),
            "vertical_order": {
                str(k): [str(s) for s in v] for k, v in self.vertical_order.items()
            },
            "horizontal_order": {
                str(k): [str(s) for s in v] for k, v in self.horizontal_order.items()
            },
            "sigma": {str(k): perm(d) for k, d in self.sigma.items()},
            "tau": {str(k): perm(d) for k, d in self.tau.items()},
            "vertical_boundaries": {
                str(k): [b.evaluate(self.eigen) for b in v]
                for k, v in self.vertical_boundaries.items()
            },
            "horizontal_boundaries": {
                str(k): [b.evaluate(self.eigen) for b in v]
                for k, v in self.horizontal_boundaries.items()
            },
        }


def _canonical_labels(M: IntMatrix, k: int, orientation: str) -> tuple[StripLabel, ...]:
    n = M.n
    out = []
    for i in range(1, n + 1):
        mult = M[i - 1, k - 1] if orientation == VERTICAL else M[k - 1, i - 1]
        out.extend(StripLabel(orientation, k, i, j) for j in range(1, mult + 1))
    return tuple(out)


def _check_permutation(perm: dict, labels: tuple[StripLabel, ...], M: IntMatrix):
    label_set = set(labels)
    if set(perm.keys()) != label_set or set(perm.values()) != label_set:
        raise InvalidInputError("permutation does not act on the rectangle's labels")
    for lab in perm:
        _validate_label(lab, M)


def build_decomposition(
    M: IntMatrix,
    eigen: PerronData,
    sigma: dict[int, dict[StripLabel, StripLabel]] | None = None,
    tau: dict[int, dict[StripLabel, StripLabel]] | None = None,
) -> StripDecomposition:
    """Strip decomposition for M; sigma/tau default to the identity."""
    n = M.n
    vertical_order = {k: _canonical_labels(M, k, VERTICAL) for k in range(1, n + 1)}
    horizontal_order = {k: _canonical_labels(M, k, HORIZONTAL) for k in range(1, n + 1)}

    if sigma is None:
        sigma = {k: {s: s for s in horizontal_order[k]} for k in range(1, n + 1)}
    if tau is None:
        tau = {k: {s: s for s in vertical_order[k]} for k in range(1, n + 1)}
    for k in range(1, n + 1):
        _check_permutation(sigma.get(k, {}), horizontal_order[k], M)
        _check_permutation(tau.get(k, {}), vertical_order[k], M)

    vertical_boundaries = {}
    horizontal_boundaries = {}
    for k in range(1, n + 1):
        acc = SymbolicLength.zero(n, "W")
        vb = [acc]
        for lab in vertical_order[k]:
            acc = acc + SymbolicLength.unit(n, tau[k][lab].source, "W")
            vb.append(acc)
        vertical_boundaries[k] = tuple(vb)

        sigma_inv = {v: u for u, v in sigma[k].items()}
        acc = SymbolicLength.zero(n, "H")
        hb = [acc]
        for lab in horizontal_order[k]:
            acc = acc + SymbolicLength.unit(n, sigma_inv[lab].source, "H")
            hb.append(acc)
        horizontal_boundaries[k] = tuple(hb)

    return StripDecomposition(
        matrix=M,
        eigen=eigen,
        vertical_order=vertical_order,
        horizontal_order=horizontal_order,
        sigma=sigma,
        tau=tau,
        vertical_boundaries=vertical_boundaries,
        horizontal_boundaries=horizontal_boundaries,
    )


@dataclass(frozen=True)
class PieceMapBranch:
    """One affine branch of the piece map.

    Maps the vertical strip ``source_label`` (in rectangle source_rect,
    x in [x0, x0 + width], full height) onto the horizontal strip
    ``target_label`` (in rectangle target_rect, full width, y in
    [y0, y0 + height]) via (x, y) -> (lam*(x - x0), y0 + y/lam).
    """

    index: tuple[int, int, int]
    source_label: StripLabel
    target_label: StripLabel
    source_rect: int
    target_rect: int
    x0: float
    width: float
    y0: float
    height: float
    lam: float

    def apply(self, x: float, y: float) -> tuple[float, float]:
        return self.lam * (x - self.x0), self.y0 + y / self.lam

    def apply_inverse(self, x: float, y: float) -> tuple[float, float]:
        return self.x0 + x / self.lam, self.lam * (y - self.y0)


@dataclass(frozen=True)
class PieceMap:
    """All branches of the piece map, indexed by source and target strip."""

    decomposition: StripDecomposition
    branches: tuple[PieceMapBranch, ...]

    def by_source(self) -> dict[StripLabel, PieceMapBranch]:
        return {b.source_label: b for b in self.branches}

    def by_target(self) -> dict[StripLabel, PieceMapBranch]:
        return {b.target_label: b for b in self.branches}


def piece_map(D: StripDecomposition) -> PieceMap:
    """Piece map of a decomposition: one branch per (k, i, j) arc unit.

    The branch for (k, i, j) carries the vertical strip tau_k^-1(V^(k)_{i,j})
    onto the horizontal strip sigma_i(H^(i)_{k,j}).
    """
    M, eigen = D.matrix, D.eigen
    n = M.n
    branches = []
    for k in range(1, n + 1):
        tau_inv = D.tau_inv(k)
        for i in range(1, n + 1):
            for j in range(1, M[i - 1, k - 1] + 1):
                src = tau_inv[StripLabel(VERTICAL, k, i, j)]
                tgt = D.sigma[i][StripLabel(HORIZONTAL, i, k, j)]
                x0, x1 = D.strip_interval(src)
                y0, y1 = D.strip_interval(tgt)
                branches.append(
                    PieceMapBranch(
                        index=(k, i, j),
                        source_label=src,
                        target_label=tgt,
                        source_rect=k,
                        target_rect=i,
                        x0=x0,
                        width=x1 - x0,
                        y0=y0,
                        height=y1 - y0,
                        lam=eigen.lam,
                    )
                )
    src_seen = {b.source_label for b in branches}
    tgt_seen = {b.target_label for b in branches}
    if len(src_seen) != len(branches) or len(tgt_seen) != len(branches):
        raise InvalidInputError("sigma/tau do not induce a strip bijection")
    return PieceMap(decomposition=D, branches=tuple(branches))


def _embedded_cycle_through_first_vertex(M: IntMatrix) -> list[int]:
    """Simple directed cycle through vertex 1 (DFS, ascending successors).

    Vertices are 1-based; an arc k -> i exists when M[i-1][k-1] > 0.
    """
    g = M.digraph()
    path = [0]
    on_path = {0}

    def dfs(v: int) -> bool:
        for u in g.successors(v):
            if u == 0 and len(path) >= 1:
                return True
            if u not in on_path:
                path.append(u)
                on_path.add(u)
                if dfs(u):
                    return True
                on_path.remove(path.pop())
        return False

    if not dfs(0):
        raise PreconditionError("no cycle through the first vertex")
    return [v + 1 for v in path]


def _constrained_completion(
    labels: tuple[StripLabel, ...], pairs: dict[StripLabel, StripLabel]
) -> dict[StripLabel, StripLabel]:
    """Bijection on labels honoring pairs; the rest matched in ascending order."""
    remaining_src = sorted(set(labels) - set(pairs.keys()))
    remaining_tgt = sorted(set(labels) - set(pairs.values()))
    out = dict(pairs)
    out.update(zip(remaining_src, remaining_tgt))
    return out


def corner_selection(M: IntMatrix) -> tuple[dict, dict]:
    """sigma/tau making the top-left corner of Q_1 periodic under f_L.

    Along an embedded cycle s_1 = 1, s_2, ..., s_k through the first vertex,
    tau_{s_j} sends the leftmost vertical strip of Q_{s_j} to
    V^(s_j)_{s_{j+1},1} and sigma_{s_{j+1}} sends H^(s_{j+1})_{s_j,1} to the
    topmost horizontal strip; off the constraints, labels are matched in
    ascending order.
    """
    if not is_irreducible(M):
        raise PreconditionError("corner_selection requires an irreducible matrix")
    n = M.n
    cycle = _embedded_cycle_through_first_vertex(M)
    klen = len(cycle)

    tau_pairs: dict[int, dict] = {k: {} for k in range(1, n + 1)}
    sigma_pairs: dict[int, dict] = {k: {} for k in range(1, n + 1)}
    for t in range(klen):
        s, s_next = cycle[t], cycle[(t + 1) % klen]
        v_min = _canonical_labels(M, s, VERTICAL)[0]
        tau_pairs[s][v_min] = StripLabel(VERTICAL, s, s_next, 1)
        h_min = _canonical_labels(M, s_next, HORIZONTAL)[0]
        sigma_pairs[s_next][StripLabel(HORIZONTAL, s_next, s, 1)] = h_min

    tau = {
        k: _constrained_completion(_canonical_labels(M, k, VERTICAL), tau_pairs[k])
        for k in range(1, n + 1)
    }
    sigma = {
        k: _constrained_completion(_canonical_labels(M, k, HORIZONTAL), sigma_pairs[k])
        for k in range(1, n + 1)
    }
    return sigma, tau

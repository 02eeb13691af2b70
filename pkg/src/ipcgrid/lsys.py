"""Labeled LTI state-space toolbox.

Continuous-time models dx/dt = Ax + Bu, y = Cx + Du with named states,
inputs and outputs. Provides block interconnection by label wiring,
numerical linearization of nonlinear blocks, frequency response and
eigen-analysis. Everything here is pure and immutable after construction,
so models can be shared freely between parallel workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg


class LsysError(Exception):
    pass


class UnknownLabel(LsysError):
    pass


class AlgebraicLoop(LsysError):
    """A direct-feedthrough cycle was found in the requested wiring."""


class NotAtEquilibrium(LsysError):
    pass


class SingularResolvent(LsysError):
    """A frequency grid point collides with an imaginary-axis eigenvalue."""


class ConvergenceFailure(LsysError):
    pass


class DefectiveMatrix(LsysError):
    pass


def _check_labels(labels: Sequence[str], n: int, kind: str) -> tuple[str, ...]:
    labels = tuple(labels)
    if len(labels) != n:
        raise ValueError(f"{kind} labels: expected {n}, got {len(labels)}")
    if len(set(labels)) != len(labels):
        raise ValueError(f"{kind} labels are not unique: {labels}")
    return labels


@dataclass(frozen=True)
class StateSpaceModel:
    """LTI system with labeled states, inputs and outputs."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    state_labels: tuple[str, ...] = ()
    input_labels: tuple[str, ...] = ()
    output_labels: tuple[str, ...] = ()

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        n = A.shape[0]
        B = np.asarray(self.B, dtype=float).reshape(n, -1)
        m = B.shape[1]
        C = np.asarray(self.C, dtype=float).reshape(-1, n)
        p = C.shape[0]
        D = np.asarray(self.D, dtype=float).reshape(p, m)
        if A.shape != (n, n):
            raise ValueError(f"A must be square, got {A.shape}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "D", D)
        state = self.state_labels or tuple(f"x{i}" for i in range(n))
        inp = self.input_labels or tuple(f"u{i}" for i in range(m))
        out = self.output_labels or tuple(f"y{i}" for i in range(p))
        object.__setattr__(self, "state_labels", _check_labels(state, n, "state"))
        object.__setattr__(self, "input_labels", _check_labels(inp, m, "input"))
        object.__setattr__(self, "output_labels", _check_labels(out, p, "output"))
        for arr in (A, B, C, D):
            arr.setflags(write=False)

    @property
    def n_states(self) -> int:
        return self.A.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.B.shape[1]

    @property
    def n_outputs(self) -> int:
        return self.C.shape[0]

    def input_index(self, label: str) -> int:
        try:
            return self.input_labels.index(label)
        except ValueError:
            raise UnknownLabel(f"input {label!r} not in {self.input_labels}") from None

    def output_index(self, label: str) -> int:
        try:
            return self.output_labels.index(label)
        except ValueError:
            raise UnknownLabel(f"output {label!r} not in {self.output_labels}") from None


@dataclass(frozen=True)
class NonlinearBlock:
    """Nonlinear ODE block dx/dt = f(x,u), y = g(x,u) with labeled ports.

    ``feedthrough`` is the structural output-from-input dependency mask
    (p x m bool); it is what the interconnection machinery uses to reject
    algebraic loops, so it must cover every true direct path. ``None``
    means "assume full feedthrough".
    """

    n_states: int
    input_labels: tuple[str, ...]
    output_labels: tuple[str, ...]
    f: Callable[[np.ndarray, np.ndarray], np.ndarray]
    g: Callable[[np.ndarray, np.ndarray], np.ndarray]
    state_labels: tuple[str, ...] = ()
    feedthrough: np.ndarray | None = None
    jac_fx: Callable | None = None
    jac_fu: Callable | None = None
    jac_gx: Callable | None = None
    jac_gu: Callable | None = None

    def __post_init__(self):
        inp = _check_labels(self.input_labels, len(self.input_labels), "input")
        out = _check_labels(self.output_labels, len(self.output_labels), "output")
        st = self.state_labels or tuple(f"x{i}" for i in range(self.n_states))
        object.__setattr__(self, "input_labels", inp)
        object.__setattr__(self, "output_labels", out)
        object.__setattr__(self, "state_labels", _check_labels(st, self.n_states, "state"))
        if self.feedthrough is not None:
            ft = np.asarray(self.feedthrough, dtype=bool).reshape(len(out), len(inp))
            ft.setflags(write=False)
            object.__setattr__(self, "feedthrough", ft)
        jacs = (self.jac_fx, self.jac_fu, self.jac_gx, self.jac_gu)
        if any(j is not None for j in jacs) and not all(j is not None for j in jacs):
            raise ValueError("supply all four analytic Jacobians or none")

    @property
    def n_inputs(self) -> int:
        return len(self.input_labels)

    @property
    def n_outputs(self) -> int:
        return len(self.output_labels)

    @property
    def has_jacobians(self) -> bool:
        return self.jac_fx is not None


def ss_to_block(model: StateSpaceModel) -> NonlinearBlock:
    """Wrap an LTI model as a NonlinearBlock (affine evaluation)."""
    A, B, C, D = model.A, model.B, model.C, model.D
    return NonlinearBlock(
        n_states=model.n_states,
        input_labels=model.input_labels,
        output_labels=model.output_labels,
        state_labels=model.state_labels,
        f=lambda x, u: A @ x + B @ u,
        g=lambda x, u: C @ x + D @ u,
        feedthrough=np.abs(D) > 0.0,
        jac_fx=lambda x, u: A,
        jac_fu=lambda x, u: B,
        jac_gx=lambda x, u: C,
        jac_gu=lambda x, u: D,
    )


@dataclass(frozen=True)
class FrequencyGrid:
    """Strictly increasing positive angular frequencies (rad/s)."""

    omegas: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.omegas, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("frequency grid must be a non-empty 1-d array")
        if np.any(w <= 0):
            raise ValueError("frequencies must be > 0")
        if np.any(np.diff(w) <= 0):
            raise ValueError("frequencies must be strictly increasing")
        w.setflags(write=False)
        object.__setattr__(self, "omegas", w)

    @classmethod
    def log_hz(cls, f_min: float = 0.1, f_max: float = 1000.0, n: int = 400) -> "FrequencyGrid":
        """Log-spaced grid given in Hz. Default 400 points, 0.1 Hz - 1 kHz."""
        if not (0 < f_min < f_max):
            raise ValueError("need 0 < f_min < f_max")
        return cls(2.0 * np.pi * np.logspace(np.log10(f_min), np.log10(f_max), n))

    @property
    def hz(self) -> np.ndarray:
        return self.omegas / (2.0 * np.pi)

    def __len__(self) -> int:
        return self.omegas.size


# ---------------------------------------------------------------------------
# interconnection


def _signal_map(blocks: Sequence[StateSpaceModel | NonlinearBlock]):
    """Index every output and input signal across blocks; names must be unique."""
    out_of = {}
    in_of = {}
    for bi, b in enumerate(blocks):
        for oi, lab in enumerate(b.output_labels):
            if lab in out_of:
                raise UnknownLabel(f"output label {lab!r} appears in more than one block")
            out_of[lab] = (bi, oi)
        for ii, lab in enumerate(b.input_labels):
            if lab in in_of:
                raise UnknownLabel(f"input label {lab!r} appears in more than one block")
            in_of[lab] = (bi, ii)
    return out_of, in_of


def _feedthrough_mask(block) -> np.ndarray:
    if isinstance(block, StateSpaceModel):
        return np.abs(block.D) > 0.0
    if block.feedthrough is not None:
        return block.feedthrough
    return np.ones((block.n_outputs, block.n_inputs), dtype=bool)


def _check_algebraic_loops(blocks, wiring, out_of, in_of) -> int:
    """Validate the wiring has no direct-feedthrough cycle.

    Returns the maximum feedthrough chain depth (0 when no output has any
    feedthrough from a wired input), which is the number of extra resolution
    passes needed to settle all signal values.
    Raises AlgebraicLoop when the wired direct-feedthrough graph is cyclic.
    """
    masks = [_feedthrough_mask(b) for b in blocks]
    # signal-level DAG: output node -> wired input node -> feedthrough output
    sig_edges: dict[tuple, set[tuple]] = {}
    for src, dst in wiring:
        sb, so = out_of[src]
        db, di = in_of[dst]
        sig_edges.setdefault(("o", sb, so), set()).add(("i", db, di))
    for bi, b in enumerate(blocks):
        m = masks[bi]
        for oi in range(m.shape[0]):
            for ii in np.nonzero(m[oi])[0]:
                sig_edges.setdefault(("i", bi, int(ii)), set()).add(("o", bi, oi))

    # longest-path DP with cycle detection (iterative DFS)
    depth: dict[tuple, int] = {}
    ONPATH, DONE = 1, 2
    state: dict[tuple, int] = {}
    for start in list(sig_edges.keys()):
        if state.get(start) == DONE:
            continue
        stack = [(start, iter(sig_edges.get(start, ())))]
        state[start] = ONPATH
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                st = state.get(nxt)
                if st == ONPATH:
                    raise AlgebraicLoop(
                        "direct-feedthrough cycle through signal "
                        f"{nxt}; insert a declared low-pass to break it"
                    )
                if st != DONE:
                    state[nxt] = ONPATH
                    stack.append((nxt, iter(sig_edges.get(nxt, ()))))
                    advanced = True
                    break
            if not advanced:
                succ = sig_edges.get(node, ())
                depth[node] = 1 + max((depth[s] for s in succ), default=0)
                state[node] = DONE
                stack.pop()
    if not depth:
        return 0
    # chain depth in units of feedthrough hops (each hop = input->output)
    return max(depth.values()) // 2


def connect(
    blocks: Sequence[StateSpaceModel],
    wiring: Sequence[tuple[str, str]],
    external_inputs: Sequence[str],
    external_outputs: Sequence[str],
) -> StateSpaceModel:
    """Interconnect labeled LTI blocks, eliminating the wired signals.

    ``wiring`` is a list of (output_label -> input_label) links. Every wired
    label must exist exactly once across the blocks. Direct-feedthrough
    cycles are rejected with AlgebraicLoop.
    """
    out_of, in_of = _signal_map(blocks)
    for src, dst in wiring:
        if src not in out_of:
            raise UnknownLabel(f"wiring source {src!r} is not an output of any block")
        if dst not in in_of:
            raise UnknownLabel(f"wiring target {dst!r} is not an input of any block")
    wired_inputs = [dst for _, dst in wiring]
    if len(set(wired_inputs)) != len(wired_inputs):
        raise UnknownLabel("an input label is wired more than once")
    for lab in external_inputs:
        if lab not in in_of:
            raise UnknownLabel(f"external input {lab!r} is not an input of any block")
        if lab in wired_inputs:
            raise UnknownLabel(f"external input {lab!r} is also wired internally")
    for lab in external_outputs:
        if lab not in out_of:
            raise UnknownLabel(f"external output {lab!r} is not an output of any block")
    # inputs that are neither wired nor external default to zero
    _check_algebraic_loops(blocks, wiring, out_of, in_of)

    nx = sum(b.n_states for b in blocks)
    x_off = np.cumsum([0] + [b.n_states for b in blocks])
    u_off = np.cumsum([0] + [b.n_inputs for b in blocks])
    y_off = np.cumsum([0] + [b.n_outputs for b in blocks])
    nu = u_off[-1]
    ny = y_off[-1]

    A = np.zeros((nx, nx))
    B = np.zeros((nx, nu))
    C = np.zeros((ny, nx))
    D = np.zeros((ny, nu))
    for bi, b in enumerate(blocks):
        A[x_off[bi]:x_off[bi + 1], x_off[bi]:x_off[bi + 1]] = b.A
        B[x_off[bi]:x_off[bi + 1], u_off[bi]:u_off[bi + 1]] = b.B
        C[y_off[bi]:y_off[bi + 1], x_off[bi]:x_off[bi + 1]] = b.C
        D[y_off[bi]:y_off[bi + 1], u_off[bi]:u_off[bi + 1]] = b.D

    # u = W y + E u_ext
    ne = len(external_inputs)
    W = np.zeros((nu, ny))
    E = np.zeros((nu, ne))
    for src, dst in wiring:
        sb, so = out_of[src]
        db, di = in_of[dst]
        W[u_off[db] + di, y_off[sb] + so] = 1.0
    for k, lab in enumerate(external_inputs):
        db, di = in_of[lab]
        E[u_off[db] + di, k] = 1.0

    # y = Cx + D(W y + E u_ext)  =>  (I - D W) y = Cx + D E u_ext
    M = np.eye(ny) - D @ W
    # M is invertible because the feedthrough graph is acyclic (triangular
    # under a suitable permutation)
    Minv = np.linalg.solve(M, np.eye(ny))
    y_x = Minv @ C
    y_u = Minv @ D @ E
    u_x = W @ y_x
    u_u = W @ y_u + E

    A_cl = A + B @ u_x
    B_cl = B @ u_u
    sel = np.zeros((len(external_outputs), ny))
    for k, lab in enumerate(external_outputs):
        sb, so = out_of[lab]
        sel[k, y_off[sb] + so] = 1.0
    C_cl = sel @ y_x
    D_cl = sel @ y_u

    state_labels = []
    for bi, b in enumerate(blocks):
        state_labels.extend(b.state_labels)
    if len(set(state_labels)) != len(state_labels):
        state_labels = [f"b{bi}.{lab}" for bi, b in enumerate(blocks) for lab in b.state_labels]
    return StateSpaceModel(
        A_cl, B_cl, C_cl, D_cl,
        state_labels=tuple(state_labels),
        input_labels=tuple(external_inputs),
        output_labels=tuple(external_outputs),
    )


# ---------------------------------------------------------------------------
# nonlinear composition


class CompositeBlock:
    """Wired collection of NonlinearBlocks acting as one ODE system.

    Input resolution follows the feedthrough-safe evaluation order computed
    at construction; unwired, non-external inputs are held at a constant
    default (zero unless overridden via ``const_inputs``).
    """

    def __init__(
        self,
        blocks: Sequence[NonlinearBlock],
        wiring: Sequence[tuple[str, str]],
        external_inputs: Sequence[str],
        external_outputs: Sequence[str],
        const_inputs: dict[str, float] | None = None,
    ):
        self.blocks = list(blocks)
        self.wiring = list(wiring)
        self.external_inputs = tuple(external_inputs)
        self.external_outputs = tuple(external_outputs)
        out_of, in_of = _signal_map(self.blocks)
        for src, dst in self.wiring:
            if src not in out_of:
                raise UnknownLabel(f"wiring source {src!r} unknown")
            if dst not in in_of:
                raise UnknownLabel(f"wiring target {dst!r} unknown")
        wired = [dst for _, dst in self.wiring]
        if len(set(wired)) != len(wired):
            raise UnknownLabel("an input label is wired more than once")
        for lab in self.external_inputs:
            if lab not in in_of:
                raise UnknownLabel(f"external input {lab!r} unknown")
        for lab in self.external_outputs:
            if lab not in out_of:
                raise UnknownLabel(f"external output {lab!r} unknown")
        self._out_of = out_of
        self._in_of = in_of
        self.ft_depth = _check_algebraic_loops(self.blocks, self.wiring, out_of, in_of)
        self._x_off = np.cumsum([0] + [b.n_states for b in self.blocks])
        self.n_states = int(self._x_off[-1])
        self.state_labels = tuple(
            lab for b in self.blocks for lab in b.state_labels
        ) if len({lab for b in self.blocks for lab in b.state_labels}) == self.n_states else tuple(
            f"b{bi}.{lab}" for bi, b in enumerate(self.blocks) for lab in b.state_labels
        )
        self.input_labels = self.external_inputs
        self.output_labels = self.external_outputs
        self.const_inputs = dict(const_inputs or {})
        # precompute per-block input sources: ("w", src block, out idx),
        # ("e", ext index) or ("c", constant value)
        self._src = []
        wire_by_dst = {dst: src for src, dst in self.wiring}
        for bi, b in enumerate(self.blocks):
            rows = []
            for lab in b.input_labels:
                if lab in wire_by_dst:
                    rows.append(("w",) + out_of[wire_by_dst[lab]])
                elif lab in self.external_inputs:
                    rows.append(("e", self.external_inputs.index(lab)))
                else:
                    rows.append(("c", self.const_inputs.get(lab, 0.0)))
            self._src.append(rows)

    def split(self, x: np.ndarray) -> list[np.ndarray]:
        return [x[self._x_off[i]:self._x_off[i + 1]] for i in range(len(self.blocks))]

    def _resolve(self, x: np.ndarray, u_ext: np.ndarray):
        """Settle all block inputs/outputs by fixed-point passes.

        Signals at feedthrough depth d are exact after d+1 passes; the
        wiring was proven acyclic, so ft_depth+1 passes settle everything.
        """
        xs = self.split(x)
        nb = len(self.blocks)
        ys: list[np.ndarray] = [np.zeros(b.n_outputs) for b in self.blocks]
        us: list[np.ndarray] = [np.empty(b.n_inputs) for b in self.blocks]
        for _ in range(self.ft_depth + 1):
            for bi in range(nb):
                u = us[bi]
                for ii, srcspec in enumerate(self._src[bi]):
                    kind = srcspec[0]
                    if kind == "w":
                        u[ii] = ys[srcspec[1]][srcspec[2]]
                    elif kind == "e":
                        u[ii] = u_ext[srcspec[1]]
                    else:
                        u[ii] = srcspec[1]
            for bi in range(nb):
                ys[bi] = np.asarray(self.blocks[bi].g(xs[bi], us[bi]))
        # final input refresh so f() sees settled values
        for bi in range(nb):
            u = us[bi]
            for ii, srcspec in enumerate(self._src[bi]):
                kind = srcspec[0]
                if kind == "w":
                    u[ii] = ys[srcspec[1]][srcspec[2]]
                elif kind == "e":
                    u[ii] = u_ext[srcspec[1]]
                else:
                    u[ii] = srcspec[1]
        return xs, us, ys

    def f(self, x: np.ndarray, u_ext: np.ndarray) -> np.ndarray:
        xs, us, _ = self._resolve(x, u_ext)
        dx = np.empty(self.n_states)
        for bi, b in enumerate(self.blocks):
            if b.n_states:
                dx[self._x_off[bi]:self._x_off[bi + 1]] = b.f(xs[bi], us[bi])
        return dx

    def g(self, x: np.ndarray, u_ext: np.ndarray) -> np.ndarray:
        _, _, ys = self._resolve(x, u_ext)
        out = np.empty(len(self.external_outputs))
        for k, lab in enumerate(self.external_outputs):
            sb, so = self._out_of[lab]
            out[k] = ys[sb][so]
        return out

    def local_points(self, x: np.ndarray, u_ext: np.ndarray):
        """Per-block (x_i, u_i) at a composite operating point."""
        xs, us, _ = self._resolve(x, u_ext)
        return xs, us

    def as_block(self) -> NonlinearBlock:
        return NonlinearBlock(
            n_states=self.n_states,
            input_labels=self.input_labels,
            output_labels=self.output_labels,
            state_labels=self.state_labels,
            f=self.f,
            g=self.g,
            feedthrough=None,
        )


# ---------------------------------------------------------------------------
# linearization

EQUILIBRIUM_TOL = 1e-9
FD_REL_STEP = 1e-6
FD_ABS_FLOOR = 1e-9


def _fd_jacobian(fun, v0: np.ndarray, n_out: int) -> np.ndarray:
    """Central finite differences, relative step with absolute floor."""
    v0 = np.asarray(v0, dtype=float)
    J = np.zeros((n_out, v0.size))
    for k in range(v0.size):
        h = FD_REL_STEP * max(abs(v0[k]), FD_ABS_FLOOR / FD_REL_STEP)
        vp = v0.copy()
        vm = v0.copy()
        vp[k] += h
        vm[k] -= h
        J[:, k] = (np.asarray(fun(vp)) - np.asarray(fun(vm))) / (2.0 * h)
    return J


def linearize(
    block: NonlinearBlock | CompositeBlock,
    x0: np.ndarray,
    u0: np.ndarray,
    equilibrium_tol: float = EQUILIBRIUM_TOL,
    check_equilibrium: bool = True,
) -> StateSpaceModel:
    """Linearize a nonlinear block at an equilibrium (x0, u0).

    Composites are linearized block-by-block and assembled exactly through
    the wiring algebra, which is both faster and better conditioned than
    finite differences across the full composite state.
    """
    if isinstance(block, CompositeBlock):
        return linearize_composite(
            block, x0, u0,
            equilibrium_tol=equilibrium_tol,
            check_equilibrium=check_equilibrium,
        )
    blk = block
    x0 = np.asarray(x0, dtype=float)
    u0 = np.asarray(u0, dtype=float)
    if blk.n_states:
        resid = np.max(np.abs(np.asarray(blk.f(x0, u0))))
        if check_equilibrium and resid > equilibrium_tol:
            raise NotAtEquilibrium(f"‖f(x0,u0)‖∞ = {resid:.3e} > {equilibrium_tol:.1e}")
    if blk.has_jacobians:
        A = np.asarray(blk.jac_fx(x0, u0), dtype=float).reshape(blk.n_states, blk.n_states)
        B = np.asarray(blk.jac_fu(x0, u0), dtype=float).reshape(blk.n_states, blk.n_inputs)
        C = np.asarray(blk.jac_gx(x0, u0), dtype=float).reshape(blk.n_outputs, blk.n_states)
        D = np.asarray(blk.jac_gu(x0, u0), dtype=float).reshape(blk.n_outputs, blk.n_inputs)
    else:
        n, m, p = blk.n_states, blk.n_inputs, blk.n_outputs
        A = _fd_jacobian(lambda x: blk.f(x, u0), x0, n) if n else np.zeros((0, 0))
        B = _fd_jacobian(lambda u: blk.f(x0, u), u0, n) if n else np.zeros((0, m))
        C = _fd_jacobian(lambda x: blk.g(x, u0), x0, p) if n else np.zeros((p, 0))
        D = _fd_jacobian(lambda u: blk.g(x0, u), u0, p)
    return StateSpaceModel(
        A, B, C, D,
        state_labels=blk.state_labels,
        input_labels=blk.input_labels,
        output_labels=blk.output_labels,
    )


# ---------------------------------------------------------------------------
# frequency response and eigen-analysis


def frequency_response(model: StateSpaceModel, grid: FrequencyGrid) -> np.ndarray:
    """Evaluate C (jwI - A)^-1 B + D on the grid; shape (len(grid), p, m)."""
    A, B, C, D = model.A, model.B, model.C, model.D
    eigs = np.linalg.eigvals(A) if A.size else np.array([])
    n = A.shape[0]
    out = np.empty((len(grid), C.shape[0], B.shape[1]), dtype=complex)
    I = np.eye(n)
    for k, w in enumerate(grid.omegas):
        if eigs.size and np.min(np.abs(eigs - 1j * w)) < 1e-12:
            raise SingularResolvent(f"grid point {w} rad/s collides with an eigenvalue")
        if n:
            X = np.linalg.solve(1j * w * I - A, B)
            out[k] = C @ X + D
        else:
            out[k] = D.astype(complex)
    return out


def eig(model_or_matrix, vectors: bool = False):
    """Eigenvalues (and optionally right/left eigenvector matrices).

    Left eigenvectors are normalized so Psi @ Phi = I (Psi = Phi^-1),
    which keeps participation factors basis-consistent.
    """
    if isinstance(model_or_matrix, StateSpaceModel):
        A = model_or_matrix.A
    else:
        A = np.atleast_2d(np.asarray(model_or_matrix, dtype=float))
    if A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    try:
        lam, phi = scipy.linalg.eig(A)
    except Exception as exc:  # pragma: no cover - LAPACK failure is exotic
        raise ConvergenceFailure(str(exc)) from exc
    if not vectors:
        return lam
    # Psi = Phi^-1 so that Psi @ Phi = I
    cond = np.linalg.cond(phi)
    if not np.isfinite(cond) or cond > 1e12:
        raise DefectiveMatrix(f"eigenvector matrix condition {cond:.2e}")
    psi = np.linalg.solve(phi, np.eye(A.shape[0]))
    return lam, phi, psi

"""Inference-only learned reconstruction from portable weight bundles.

A bundle is a self-describing stack of {Conv1D | Conv2D, GeLU, Softplus}
layers plus per-channel normalization statistics.  Two approaches are
supported: predicting the cell-boundary states directly, and predicting
per-cell slope stencils fed to reconstruct_with_coefficients.

Height channels pass through Softplus and are de-normalized by the positive
per-channel scale alone (no mean shift), which keeps reconstructed heights
strictly positive.
"""

import math
import struct
import zlib
from dataclasses import dataclass, field as dc_field

import numpy as np

from .equations import N_COMPONENTS, SYSTEM_FROM_TAG, SYSTEM_TAGS
from .errors import FormatError, InferenceError
from .reconstruction import FaceStates, SlopeCoefficients

MAGIC = b"NNW1"
VERSION = 1

APPROACH_TAGS = {"boundary_states": 0, "slope_coefficients": 1}
APPROACH_FROM_TAG = {v: k for k, v in APPROACH_TAGS.items()}

KIND_CONV1D, KIND_CONV2D, KIND_GELU, KIND_SOFTPLUS = 0, 1, 2, 3

_erf = np.frompyfunc(math.erf, 1, 1)


def gelu(x):
    """x * Phi(x) with the exact normal CDF."""
    x = np.asarray(x, dtype=float)
    return 0.5 * x * (1.0 + _erf(x / math.sqrt(2.0)).astype(float))


def softplus(x):
    """ln(1 + e^x), overflow-safe for large |x|."""
    return np.logaddexp(0.0, np.asarray(x, dtype=float))


@dataclass
class ConvLayer:
    weights: np.ndarray  # (out_ch, in_ch, k) or (out_ch, in_ch, k1, k2)
    bias: np.ndarray  # (out_ch,)

    @property
    def ndim(self):
        return self.weights.ndim - 2

    def __post_init__(self):
        if self.weights.ndim not in (3, 4):
            raise InferenceError("conv weights must be (out, in, k...) with 1 or 2 kernel dims")
        for k in self.weights.shape[2:]:
            if k % 2 != 1:
                raise InferenceError(f"kernel sizes must be odd, got {self.weights.shape[2:]}")
        if self.bias.shape != (self.weights.shape[0],):
            raise InferenceError("bias length must equal out_ch")


@dataclass
class GeluLayer:
    pass


@dataclass
class SoftplusLayer:
    pass


def conv(x, weights, bias, padding="wrap"):
    """Same-size cross-correlation with periodic (or reflect) padding."""
    x = np.asarray(x, dtype=float)
    weights = np.asarray(weights, dtype=float)
    bias = np.asarray(bias, dtype=float)
    kdim = weights.ndim - 2
    if x.ndim - 1 != kdim:
        raise InferenceError(
            f"conv input has {x.ndim - 1} space dims, kernel has {kdim}"
        )
    if x.shape[0] != weights.shape[1]:
        raise InferenceError(
            f"conv expects {weights.shape[1]} input channels, got {x.shape[0]}"
        )
    if kdim == 1:
        k = weights.shape[2]
        hw = k // 2
        xp = np.pad(x, ((0, 0), (hw, hw)), mode=padding)
        n = x.shape[1]
        out = np.repeat(bias[:, None], n, axis=1).astype(float)
        for i in range(k):
            out += np.einsum("oc,cn->on", weights[:, :, i], xp[:, i : i + n])
        return out
    k1, k2 = weights.shape[2:]
    h1, h2 = k1 // 2, k2 // 2
    xp = np.pad(x, ((0, 0), (h1, h1), (h2, h2)), mode=padding)
    n1, n2 = x.shape[1:]
    out = np.broadcast_to(bias[:, None, None], (len(bias), n1, n2)).astype(float).copy()
    for i in range(k1):
        for j in range(k2):
            out += np.einsum(
                "oc,cmn->omn", weights[:, :, i, j], xp[:, i : i + n1, j : j + n2]
            )
    return out


@dataclass
class WeightBundle:
    approach: str
    system: str
    norm_mean: np.ndarray
    norm_scale: np.ndarray
    layers: list = dc_field(default_factory=list)

    @property
    def n_components(self):
        return N_COMPONENTS[self.system]

    @property
    def grid_ndim(self):
        return 1 if self.system in ("swe1d", "euler1d") else 2

    @property
    def n_face_sets(self):
        # l/r boundary values in 1D; l/u/r/b in 2D (and on the sphere).
        return 2 if self.grid_ndim == 1 else 4

    def output_channels(self):
        out = self.n_components
        for layer in self.layers:
            if isinstance(layer, ConvLayer):
                out = layer.weights.shape[0]
        return out

    def h_channel_indices(self):
        """Output channels that carry reconstructed heights."""
        if self.approach != "boundary_states" or not self.system.startswith("swe"):
            return ()
        ncomp = self.n_components
        return tuple(k * ncomp for k in range(self.n_face_sets))


def validate_bundle(bundle):
    if bundle.approach not in APPROACH_TAGS:
        raise InferenceError(f"unknown approach '{bundle.approach}'")
    ncomp = bundle.n_components
    if bundle.norm_mean.shape != (ncomp,) or bundle.norm_scale.shape != (ncomp,):
        raise InferenceError(f"normalization stats must have {ncomp} channels")
    if np.any(bundle.norm_scale <= 0):
        raise InferenceError("normalization scales must be positive")
    chans = ncomp
    conv_ndim = 1 if bundle.grid_ndim == 1 else 2
    for i, layer in enumerate(bundle.layers):
        if isinstance(layer, ConvLayer):
            if layer.ndim != conv_ndim:
                raise InferenceError(
                    f"layer {i}: Conv{layer.ndim}D in a {conv_ndim}D bundle"
                )
            if layer.weights.shape[1] != chans:
                raise InferenceError(
                    f"layer {i}: expects {layer.weights.shape[1]} channels, "
                    f"chain carries {chans}"
                )
            chans = layer.weights.shape[0]
    out = chans
    if bundle.approach == "boundary_states":
        if not bundle.system.startswith("swe"):
            raise InferenceError("boundary-state bundles support SWE systems only")
        expected = bundle.n_face_sets * ncomp
        if out != expected:
            raise InferenceError(
                f"boundary-state bundle must emit {expected} channels, emits {out}"
            )
        if not bundle.layers or not isinstance(bundle.layers[-1], SoftplusLayer):
            raise InferenceError(
                "boundary-state bundles must end with a Softplus layer"
            )
    else:
        ndirs = 1 if bundle.grid_ndim == 1 else 2
        per = ncomp * ndirs
        if out % per != 0 or (out // per) % 2 != 1:
            raise InferenceError(
                f"slope bundle output {out} is not components x odd width"
                f" x directions ({per} x odd)"
            )
    return bundle


def _forward(bundle, x, padding):
    xs = (x - bundle.norm_mean.reshape((-1,) + (1,) * (x.ndim - 1))) / (
        bundle.norm_scale.reshape((-1,) + (1,) * (x.ndim - 1))
    )
    h_rows = bundle.h_channel_indices()
    for i, layer in enumerate(bundle.layers):
        if isinstance(layer, ConvLayer):
            xs = conv(xs, layer.weights, layer.bias, padding)
        elif isinstance(layer, GeluLayer):
            xs = gelu(xs)
        elif isinstance(layer, SoftplusLayer):
            if i == len(bundle.layers) - 1 and h_rows:
                for r in h_rows:
                    xs[r] = softplus(xs[r])
            else:
                xs = softplus(xs)
        else:
            raise InferenceError(f"unknown layer {type(layer).__name__}")
    return xs


def _denormalize_states(bundle, block):
    """Map raw output channels back to state units, per component."""
    ncomp = bundle.n_components
    mean = bundle.norm_mean.reshape((-1,) + (1,) * (block.ndim - 1))
    scale = bundle.norm_scale.reshape((-1,) + (1,) * (block.ndim - 1))
    out = block * scale
    if bundle.system.startswith("swe"):
        out[1:] += mean[1:]  # heights stay scale-only to preserve positivity
    else:
        out += mean
    return out


def _pair_faces(upper_vals, lower_vals, axis):
    """FaceStates from per-cell boundary values: face f pairs cell (f-1)'s
    upper-side value with cell f's lower-side value; the domain wraps."""
    left = np.concatenate([upper_vals.take([-1], axis=axis), upper_vals], axis=axis)
    right = np.concatenate([lower_vals, lower_vals.take([0], axis=axis)], axis=axis)
    return FaceStates(left=left, right=right)


def infer_boundary_states(bundle, q, padding="wrap"):
    """Per-face states predicted directly from the cell averages.

    Returns FaceStates for 1D systems, {"x": FaceStates, "y": FaceStates}
    for 2D; faces wrap periodically.
    """
    validate_bundle(bundle)
    if bundle.approach != "boundary_states":
        raise InferenceError("bundle does not hold boundary-state weights")
    q = np.asarray(q, dtype=float)
    ncomp = bundle.n_components
    if q.shape[0] != ncomp:
        raise InferenceError(f"field has {q.shape[0]} components, bundle wants {ncomp}")
    raw = _forward(bundle, q, padding)
    sets = [
        _denormalize_states(bundle, raw[k * ncomp : (k + 1) * ncomp])
        for k in range(bundle.n_face_sets)
    ]
    if bundle.grid_ndim == 1:
        ql_cells, qr_cells = sets
        return _pair_faces(qr_cells, ql_cells, axis=1)
    ql_cells, qu_cells, qr_cells, qb_cells = sets
    return {
        "x": _pair_faces(qr_cells, ql_cells, axis=1),
        "y": _pair_faces(qu_cells, qb_cells, axis=2),
    }


def infer_slope_coefficients(bundle, q, padding="wrap"):
    """Per-cell slope stencils; SlopeCoefficients (1D) or per-axis dict."""
    validate_bundle(bundle)
    if bundle.approach != "slope_coefficients":
        raise InferenceError("bundle does not hold slope-coefficient weights")
    q = np.asarray(q, dtype=float)
    ncomp = bundle.n_components
    if q.shape[0] != ncomp:
        raise InferenceError(f"field has {q.shape[0]} components, bundle wants {ncomp}")
    raw = _forward(bundle, q, padding)
    ndirs = 1 if bundle.grid_ndim == 1 else 2
    width = raw.shape[0] // (ncomp * ndirs)
    spatial = raw.shape[1:]
    alpha = raw.reshape((ndirs, ncomp, width) + spatial)
    alpha = np.moveaxis(alpha, 2, -1)  # (ndirs, ncomp, cells..., width)
    if ndirs == 1:
        return SlopeCoefficients(np.ascontiguousarray(alpha[0]))
    return {
        "x": SlopeCoefficients(np.ascontiguousarray(alpha[0])),
        "y": SlopeCoefficients(np.ascontiguousarray(alpha[1])),
    }


def coefficient_provider(bundle, padding="wrap"):
    """Adapter feeding bundle inference into the solver's reconstruction."""

    def provider(q_interior, axis):
        result = infer_slope_coefficients(bundle, q_interior, padding)
        if isinstance(result, dict):
            return result["x" if axis == 1 else "y"]
        return result

    return provider


def save_weights(bundle, path):
    validate_bundle(bundle)
    blob = bytearray()
    blob += MAGIC
    blob += struct.pack(
        "<IBBH",
        VERSION,
        APPROACH_TAGS[bundle.approach],
        SYSTEM_TAGS[bundle.system],
        bundle.n_components,
    )
    for m, s in zip(bundle.norm_mean, bundle.norm_scale):
        blob += struct.pack("<dd", m, s)
    blob += struct.pack("<I", len(bundle.layers))
    for layer in bundle.layers:
        if isinstance(layer, ConvLayer):
            kdims = layer.weights.shape[2:]
            blob += struct.pack("<B", KIND_CONV1D if layer.ndim == 1 else KIND_CONV2D)
            blob += struct.pack(
                "<II", layer.weights.shape[1], layer.weights.shape[0]
            )
            blob += struct.pack(f"<{len(kdims)}I", *kdims)
            blob += np.ascontiguousarray(layer.weights, dtype="<f8").tobytes()
            blob += np.ascontiguousarray(layer.bias, dtype="<f8").tobytes()
        elif isinstance(layer, GeluLayer):
            blob += struct.pack("<B", KIND_GELU)
        elif isinstance(layer, SoftplusLayer):
            blob += struct.pack("<B", KIND_SOFTPLUS)
        else:
            raise InferenceError(f"cannot serialize layer {type(layer).__name__}")
    blob += struct.pack("<I", zlib.crc32(bytes(blob)) & 0xFFFFFFFF)
    with open(path, "wb") as f:
        f.write(bytes(blob))


def load_weights(path):
    with open(path, "rb") as f:
        raw = f.read()
    if len(raw) < 4 or raw[:4] != MAGIC:
        raise FormatError("not a weight bundle (bad magic)")
    if len(raw) < 16:
        raise FormatError(f"truncated weight bundle: {len(raw)} bytes")
    stored = struct.unpack("<I", raw[-4:])[0]
    actual = zlib.crc32(raw[:-4]) & 0xFFFFFFFF
    if stored != actual:
        raise FormatError(
            f"weight bundle checksum mismatch (stored {stored:#010x}, "
            f"computed {actual:#010x})"
        )
    pos = 4

    def take(n, what):
        nonlocal pos
        if pos + n > len(raw) - 4:
            raise FormatError(
                f"truncated weight bundle: needed {n} bytes for {what} at "
                f"offset {pos}"
            )
        chunk = raw[pos : pos + n]
        pos += n
        return chunk

    version, app_tag, sys_tag, nchan = struct.unpack("<IBBH", take(8, "header"))
    if version != VERSION:
        raise FormatError(f"unsupported weight bundle version {version}")
    if app_tag not in APPROACH_FROM_TAG:
        raise FormatError(f"unknown approach tag {app_tag}")
    if sys_tag not in SYSTEM_FROM_TAG:
        raise FormatError(f"unknown system tag {sys_tag}")
    stats = np.frombuffer(take(16 * nchan, "normalization stats"), dtype="<f8")
    mean = stats[0::2].astype(float)
    scale = stats[1::2].astype(float)
    (n_layers,) = struct.unpack("<I", take(4, "layer count"))
    conv_ndim_for = {KIND_CONV1D: 1, KIND_CONV2D: 2}
    layers = []
    for li in range(n_layers):
        (kind,) = struct.unpack("<B", take(1, f"layer {li} kind"))
        if kind == KIND_GELU:
            layers.append(GeluLayer())
        elif kind == KIND_SOFTPLUS:
            layers.append(SoftplusLayer())
        elif kind in conv_ndim_for:
            nd = conv_ndim_for[kind]
            in_ch, out_ch = struct.unpack("<II", take(8, f"layer {li} channels"))
            kdims = struct.unpack(f"<{nd}I", take(4 * nd, f"layer {li} kernel"))
            wn = out_ch * in_ch * int(np.prod(kdims))
            w = np.frombuffer(take(8 * wn, f"layer {li} weights"), dtype="<f8")
            b = np.frombuffer(take(8 * out_ch, f"layer {li} bias"), dtype="<f8")
            layers.append(
                ConvLayer(
                    weights=w.reshape((out_ch, in_ch) + kdims).astype(float),
                    bias=b.astype(float),
                )
            )
        else:
            raise FormatError(f"unknown layer kind {kind} at offset {pos - 1}")
    if pos != len(raw) - 4:
        raise FormatError(f"trailing bytes in weight bundle at offset {pos}")
    bundle = WeightBundle(
        approach=APPROACH_FROM_TAG[app_tag],
        system=SYSTEM_FROM_TAG[sys_tag],
        norm_mean=mean,
        norm_scale=scale,
        layers=layers,
    )
    if nchan != bundle.n_components:
        raise FormatError(
            f"bundle declares {nchan} channels but system "
            f"'{bundle.system}' has {bundle.n_components}"
        )
    return validate_bundle(bundle)

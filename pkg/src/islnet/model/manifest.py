"""The network architecture as data: profiles, shape chains, canonical text form.

Two profiles exist. "table1" is the full 256x256 network whose layer-by-layer
output shapes and parameter counts (30,155,955 total / 30,155,907 trainable /
48 non-trainable) are the verification target. "desk" shrinks it for fast
runs: 64x64 input, conv widths divided by 4, a 256-unit hidden dense layer,
same layer pattern otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import ConfigError, DimensionError, ParameterError
from ..labels import default_labels
from ..nn.spec import LayerSpec, count_params, infer_chain

MANIFEST_VERSION = 1

TABLE1_DROPOUT = (0.25, 0.25, 0.25, 0.25, 0.4)
# the quarter-width net needs far less regularization than the 30M-param one
DESK_DROPOUT = (0.1, 0.1, 0.1, 0.1, 0.15)


@dataclass
class ArchitectureManifest:
    layers: list         # list of (layer_id, LayerSpec)
    input_shape: tuple = (256, 256, 1)
    class_count: int = 35
    version: int = MANIFEST_VERSION
    labels: list = None  # class names, index-aligned

    def __post_init__(self):
        self.input_shape = tuple(self.input_shape)
        if not self.layers:
            raise ParameterError("manifest has no layers")
        kinds = [s.kind for _, s in self.layers]
        if kinds[-1] != "softmax" or kinds[-2] != "dense":
            raise ParameterError("manifest must end with dense(classes) + softmax")
        if self.layers[-2][1].units != self.class_count:
            raise ParameterError(
                f"final dense has {self.layers[-2][1].units} units, "
                f"expected class count {self.class_count}")
        if self.labels is None:
            self.labels = default_labels(self.class_count)
        self.labels = [str(x) for x in self.labels]
        if len(self.labels) != self.class_count:
            raise ParameterError(
                f"{len(self.labels)} labels for {self.class_count} classes")
        for name in self.labels:
            if not name or any(ch.isspace() for ch in name):
                raise ParameterError(f"label {name!r} is empty or contains whitespace")
        infer_chain([s for _, s in self.layers], self.input_shape)

    def specs(self) -> list:
        return [s for _, s in self.layers]

    def counts(self) -> tuple[int, int, int]:
        """(total, trainable, non_trainable) for the whole network."""
        return count_params(self.specs(), self.input_shape)


def infer_shapes(manifest: ArchitectureManifest, input_shape=None) -> list:
    """Ordered (layer_id, output_shape) pairs; names the first failing layer."""
    shape = tuple(input_shape) if input_shape is not None else manifest.input_shape
    out = []
    cur = shape
    from ..nn.spec import output_shape as step
    for layer_id, spec in manifest.layers:
        try:
            cur = step(spec, cur)
        except DimensionError as e:
            raise DimensionError(f"layer {layer_id}: {e}") from None
        out.append((layer_id, cur))
    return out


def _conv_block_widths(divisor: int) -> list[int]:
    return [w // divisor for w in (24, 64, 64, 128, 128, 256)]


def _build(widths, dense_units, input_size, class_count, dropout_rates,
           bn_epsilon, bn_momentum, labels=None) -> ArchitectureManifest:
    d = list(dropout_rates)
    if len(d) != 5:
        raise ParameterError(f"expected 5 dropout rates, got {len(d)}")
    conv = lambda i, f, pad: (f"conv{i}", LayerSpec("conv2d", filters=f, kernel=(3, 3),
                                                    padding=pad, relu=True))
    layers = [
        conv(1, widths[0], "valid"),
        ("bn1", LayerSpec("batchnorm", epsilon=bn_epsilon, momentum=bn_momentum)),
        ("pool1", LayerSpec("maxpool2d")),
        conv(2, widths[1], "same"),
        ("drop1", LayerSpec("dropout", rate=d[0])),
        ("pool2", LayerSpec("maxpool2d")),
        conv(3, widths[2], "same"),
        ("drop2", LayerSpec("dropout", rate=d[1])),
        ("pool3", LayerSpec("maxpool2d")),
        conv(4, widths[3], "same"),
        conv(5, widths[4], "same"),
        ("drop3", LayerSpec("dropout", rate=d[2])),
        ("pool4", LayerSpec("maxpool2d")),
        conv(6, widths[5], "same"),
        ("drop4", LayerSpec("dropout", rate=d[3])),
        ("pool5", LayerSpec("maxpool2d")),
        ("flatten1", LayerSpec("flatten")),
        ("dense1", LayerSpec("dense", units=dense_units, relu=True)),
        ("drop5", LayerSpec("dropout", rate=d[4])),
        ("dense2", LayerSpec("dense", units=class_count)),
        ("softmax1", LayerSpec("softmax")),
    ]
    return ArchitectureManifest(layers, (input_size, input_size, 1), class_count,
                                labels=labels)


def build_table1(class_count: int = 35, dropout_rates=TABLE1_DROPOUT,
                 bn_epsilon: float = 1e-5, bn_momentum: float = 0.9,
                 labels=None) -> ArchitectureManifest:
    """The full-size network: 24/64/64/128/128/256 conv widths, dense 2352."""
    return _build(_conv_block_widths(1), 2352, 256, class_count, dropout_rates,
                  bn_epsilon, bn_momentum, labels)


def build_desk(class_count: int = 35, dropout_rates=DESK_DROPOUT,
               bn_epsilon: float = 1e-5, bn_momentum: float = 0.9,
               labels=None) -> ArchitectureManifest:
    """Quarter-width 64x64 variant with a 256-unit hidden dense layer."""
    return _build(_conv_block_widths(4), 256, 64, class_count, dropout_rates,
                  bn_epsilon, bn_momentum, labels)


PROFILES = {"table1": build_table1, "desk": build_desk}


def build_profile(name: str, class_count: int = 35,
                  dropout_rates=None, **kw) -> ArchitectureManifest:
    if name not in PROFILES:
        raise ConfigError(f"unknown profile {name!r}, expected one of {sorted(PROFILES)}")
    if dropout_rates is not None:
        return PROFILES[name](class_count, dropout_rates, **kw)
    return PROFILES[name](class_count, **kw)


# --------------------------------------------------- canonical text form

_FLAG_FIELDS = {"relu"}


def manifest_to_text(m: ArchitectureManifest) -> str:
    """Human-readable key-value serialization, versioned; see README for the grammar."""
    lines = [f"islm-manifest v{m.version}",
             "input " + " ".join(str(d) for d in m.input_shape),
             f"classes {m.class_count}",
             "labels " + " ".join(m.labels)]
    for layer_id, s in m.layers:
        parts = [f"layer {layer_id} {s.kind}"]
        if s.kind == "conv2d":
            parts.append(f"filters={s.filters}")
            parts.append(f"kernel={s.kernel[0]},{s.kernel[1]}")
            parts.append(f"padding={s.padding}")
            parts.append(f"relu={int(s.relu)}")
        elif s.kind == "batchnorm":
            parts.append(f"epsilon={s.epsilon!r}")
            parts.append(f"momentum={s.momentum!r}")
        elif s.kind == "dropout":
            parts.append(f"rate={s.rate!r}")
        elif s.kind == "dense":
            parts.append(f"units={s.units}")
            parts.append(f"relu={int(s.relu)}")
        lines.append(" ".join(parts))
    lines.append("end")
    return "\n".join(lines) + "\n"


def manifest_from_text(text: str) -> ArchitectureManifest:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("islm-manifest v"):
        raise ConfigError("not a manifest: missing header line")
    version = int(lines[0].split("v", 1)[1])
    if version != MANIFEST_VERSION:
        raise ConfigError(f"unsupported manifest version {version}")
    if lines[-1] != "end":
        raise ConfigError("manifest missing end marker")
    input_shape = None
    classes = None
    labels = None
    layers = []
    for ln in lines[1:-1]:
        tok = ln.split()
        if tok[0] == "input":
            input_shape = tuple(int(t) for t in tok[1:])
        elif tok[0] == "classes":
            classes = int(tok[1])
        elif tok[0] == "labels":
            labels = tok[1:]
        elif tok[0] == "layer":
            layer_id, kind = tok[1], tok[2]
            kv = dict(t.split("=", 1) for t in tok[3:])
            kwargs = {}
            if "filters" in kv:
                kwargs["filters"] = int(kv["filters"])
            if "kernel" in kv:
                kwargs["kernel"] = tuple(int(v) for v in kv["kernel"].split(","))
            if "padding" in kv:
                kwargs["padding"] = kv["padding"]
            if "relu" in kv:
                kwargs["relu"] = bool(int(kv["relu"]))
            if "units" in kv:
                kwargs["units"] = int(kv["units"])
            if "rate" in kv:
                kwargs["rate"] = float(kv["rate"])
            if "epsilon" in kv:
                kwargs["epsilon"] = float(kv["epsilon"])
            if "momentum" in kv:
                kwargs["momentum"] = float(kv["momentum"])
            layers.append((layer_id, LayerSpec(kind, **kwargs)))
        else:
            raise ConfigError(f"unknown manifest line: {ln!r}")
    if input_shape is None or classes is None:
        raise ConfigError("manifest missing input or classes line")
    return ArchitectureManifest(layers, input_shape, classes, version, labels)

import dataclasses
from typing import Optional

from libmetaact.metaglobal import ConfigError
from libmetaact.splines import ActivationBinding

HEADS = ("logits", "regression")


@dataclasses.dataclass(frozen=True)
class MlpSpec:
    """Architecture of a fully-connected network

    The network computes, for an input batch ``x``:

    1. ``x <- iaf_j(x[:, j])`` per input dimension, if `iaf` is set
    2. ``h <- act_l(h @ W_l + b_l)`` for each hidden layer ``l``, plus ``h`` itself
       for layers ``l >= 1`` when `residual` is set
    3. ``out = h @ W_L + b_L``

    With ``spectral_norm=True`` every weight matrix is divided by its largest
    singular value before use.

    Attributes
    ----------
    input_dim: int
        Input width.
    hidden: tuple[int, ...] = ()
        Hidden layer widths. Empty for a linear model.
    output_dim: int = 1
        Output width. Must be 1 for ``head="regression"``.
    residual: bool = False
        Add skip connections between hidden layers. Requires all hidden widths to
        be equal; the first hidden layer never has one.
    activation: ActivationBinding = ActivationBinding()
        Hidden-layer activations. Scope "per_layer" requires one spline per hidden
        layer.
    iaf: Optional[ActivationBinding] = None
        Input activation functions, scope "per_input" with one spline per input
        dimension. All of them share n_c, a, b, and mode; only the control
        values differ.
    spectral_norm: bool = False
        Normalize weight matrices by their largest singular value.
    head: str = "logits"
        "logits" (classification) or "regression" (one scalar output).
    """

    input_dim: int
    hidden: tuple = ()
    output_dim: int = 1
    residual: bool = False
    activation: ActivationBinding = dataclasses.field(
        default_factory=ActivationBinding
    )
    iaf: Optional[ActivationBinding] = None
    spectral_norm: bool = False
    head: str = "logits"

    def __post_init__(self):
        object.__setattr__(self, "hidden", tuple(int(w) for w in self.hidden))
        if self.input_dim < 1 or self.output_dim < 1:
            raise ConfigError("Error in MlpSpec: input_dim and output_dim must be >= 1")
        if any(w < 1 for w in self.hidden):
            raise ConfigError("Error in MlpSpec: hidden widths must be >= 1")
        if self.head not in HEADS:
            raise ConfigError(
                f"Error in MlpSpec: invalid head '{self.head}', expected one of {HEADS}"
            )
        if self.head == "regression" and self.output_dim != 1:
            raise ConfigError("Error in MlpSpec: regression head requires output_dim=1")
        if self.residual and len(set(self.hidden)) > 1:
            raise ConfigError(
                "Error in MlpSpec: residual connections require equal hidden widths, "
                f"got {self.hidden}"
            )
        act = self.activation
        if act.scope == "per_input":
            raise ConfigError(
                "Error in MlpSpec: hidden activations cannot have scope 'per_input'"
            )
        if act.kind == "spline" and act.scope == "per_layer":
            if act.count() != len(self.hidden):
                raise ConfigError(
                    f"Error in MlpSpec: {act.count()} per-layer splines for "
                    f"{len(self.hidden)} hidden layers"
                )
        if self.iaf is not None:
            if self.iaf.kind != "spline" or self.iaf.scope != "per_input":
                raise ConfigError(
                    "Error in MlpSpec: iaf must be a spline binding with scope "
                    "'per_input'"
                )
            if self.iaf.count() != self.input_dim:
                raise ConfigError(
                    f"Error in MlpSpec: {self.iaf.count()} input activation "
                    f"functions for input_dim={self.input_dim}"
                )

    @property
    def n_layers(self) -> int:
        """int: Number of affine layers, ``len(hidden) + 1``"""
        return len(self.hidden) + 1

    def layer_shapes(self) -> list[tuple[int, int]]:
        """Weight matrix shapes ``(fan_in, fan_out)``, input layer first"""
        widths = [self.input_dim, *self.hidden, self.output_dim]
        return [(widths[i], widths[i + 1]) for i in range(len(widths) - 1)]

    def has_residual(self, layer: int) -> bool:
        """True if hidden layer `layer` adds its input to its output"""
        return self.residual and layer >= 1

    def replace(self, **kwargs) -> "MlpSpec":
        """Return a copy with some fields changed"""
        return dataclasses.replace(self, **kwargs)

    def to_dict(self) -> dict:
        """Represent the MlpSpec as a Python dict"""
        return {
            "input_dim": self.input_dim,
            "hidden": list(self.hidden),
            "output_dim": self.output_dim,
            "residual": self.residual,
            "activation": self.activation.to_dict(),
            "iaf": None if self.iaf is None else self.iaf.to_dict(),
            "spectral_norm": self.spectral_norm,
            "head": self.head,
        }

    @staticmethod
    def from_dict(data: dict) -> "MlpSpec":
        """Construct an MlpSpec from a Python dict"""
        iaf = data.get("iaf")
        return MlpSpec(
            input_dim=data["input_dim"],
            hidden=tuple(data.get("hidden", [])),
            output_dim=data.get("output_dim", 1),
            residual=data.get("residual", False),
            activation=ActivationBinding.from_dict(
                data.get("activation", {"kind": "relu"})
            ),
            iaf=None if iaf is None else ActivationBinding.from_dict(iaf),
            spectral_norm=data.get("spectral_norm", False),
            head=data.get("head", "logits"),
        )


def linear_model_spec(
    input_dim: int, output_dim: int = 1, head: str = "logits"
) -> MlpSpec:
    """A network with no hidden layers, ``out = x @ W + b``"""
    return MlpSpec(input_dim=input_dim, hidden=(), output_dim=output_dim, head=head)

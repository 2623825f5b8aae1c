import dataclasses
from typing import Optional

from libmetaact.metaglobal import ConfigError
from libmetaact.splines._SplineActivation import SplineActivation

BINDING_KINDS = ("relu", "tanh", "spline")
BINDING_SCOPES = ("shared", "per_layer", "per_input")


@dataclasses.dataclass(frozen=True)
class ActivationBinding:
    """Which activation function is applied where

    Attributes
    ----------
    kind: str = "relu"
        One of "relu", "tanh" (``tanh(alpha * x)``), or "spline".
    alpha: float = 1.0
        The prefactor for ``kind="tanh"``. Must be positive.
    scope: str = "shared"
        One of:

        - "shared": one activation for every hidden layer
        - "per_layer": one activation per hidden layer
        - "per_input": one activation per input dimension (input activation
          functions, IAFs), only valid with ``kind="spline"``

    splines: tuple[SplineActivation, ...] = ()
        For ``kind="spline"``: one spline with scope "shared", one per hidden
        layer with scope "per_layer", one per input dimension with scope
        "per_input". Per-input splines must share one grid.
    """

    kind: str = "relu"
    alpha: float = 1.0
    scope: str = "shared"
    splines: tuple = ()

    def __post_init__(self):
        if self.kind not in BINDING_KINDS:
            raise ConfigError(
                f"Error in ActivationBinding: invalid kind '{self.kind}', "
                f"expected one of {BINDING_KINDS}"
            )
        if self.scope not in BINDING_SCOPES:
            raise ConfigError(
                f"Error in ActivationBinding: invalid scope '{self.scope}', "
                f"expected one of {BINDING_SCOPES}"
            )
        if self.kind == "tanh" and not self.alpha > 0.0:
            raise ConfigError(
                f"Error in ActivationBinding: alpha must be > 0, got {self.alpha}"
            )
        object.__setattr__(self, "splines", tuple(self.splines))
        if self.kind == "spline":
            if len(self.splines) == 0:
                raise ConfigError(
                    "Error in ActivationBinding: kind='spline' requires splines"
                )
            if self.scope == "shared" and len(self.splines) != 1:
                raise ConfigError(
                    "Error in ActivationBinding: scope='shared' requires exactly "
                    f"one spline, got {len(self.splines)}"
                )
            if self.scope == "per_input":
                first = self.splines[0]
                if not all(first.same_grid(s) for s in self.splines):
                    raise ConfigError(
                        "Error in ActivationBinding: per-input splines must share "
                        "n_c, a, b, and mode"
                    )
        elif self.scope == "per_input":
            raise ConfigError(
                "Error in ActivationBinding: scope='per_input' requires kind='spline'"
            )

    def count(self) -> Optional[int]:
        """Number of splines, or None if not ``kind="spline"``"""
        if self.kind != "spline":
            return None
        return len(self.splines)

    def layer_spline(self, layer: int) -> Optional[SplineActivation]:
        """The spline used by hidden layer `layer`, or None if not a spline
        binding"""
        if self.kind != "spline":
            return None
        if self.scope == "shared":
            return self.splines[0]
        return self.splines[layer]

    def with_splines(self, splines: list[SplineActivation]) -> "ActivationBinding":
        """Return a copy with new splines"""
        return dataclasses.replace(self, splines=tuple(splines))

    def to_dict(self) -> dict:
        """Represent the ActivationBinding as a Python dict"""
        data = {"kind": self.kind, "scope": self.scope}
        if self.kind == "tanh":
            data["alpha"] = self.alpha
        if self.kind == "spline":
            data["splines"] = [s.to_dict() for s in self.splines]
        return data

    @staticmethod
    def from_dict(data: dict) -> "ActivationBinding":
        """Construct an ActivationBinding from a Python dict"""
        return ActivationBinding(
            kind=data.get("kind", "relu"),
            alpha=data.get("alpha", 1.0),
            scope=data.get("scope", "shared"),
            splines=tuple(
                SplineActivation.from_dict(x) for x in data.get("splines", [])
            ),
        )


def relu_binding() -> ActivationBinding:
    """A shared ReLU binding"""
    return ActivationBinding(kind="relu")


def tanh_binding(alpha: float = 1.0) -> ActivationBinding:
    """A shared ``tanh(alpha * x)`` binding"""
    return ActivationBinding(kind="tanh", alpha=alpha)


def spline_binding(
    splines: list[SplineActivation], scope: str = "shared"
) -> ActivationBinding:
    """A spline binding with the given scope"""
    return ActivationBinding(kind="spline", scope=scope, splines=tuple(splines))

"""
ThermoCheck Transformed Fields
A ScalarField that remembers its parent and how parent points map into its variables
"""

from typing import Callable, Optional, Sequence

import numpy as np

from src.fields.scalar_field import DomainSpec, Expression, Jet2, PointLike, ScalarField, as_array

# (parent point, parent jet at that point) -> point in the transformed variables
ForwardMap = Callable[[np.ndarray, Jet2], np.ndarray]


class TransformedField(ScalarField):
    """Output of one transform step"""

    def __init__(
        self,
        parent: ScalarField,
        kind: str,
        dimension: int,
        domain: DomainSpec,
        expression: Expression,
        forward_map: ForwardMap,
        labels: Optional[Sequence[str]] = None,
        implicit: bool = False,
        provenance: Optional[str] = None,
    ):
        super().__init__(
            dimension,
            domain,
            expression,
            provenance or f"{kind}({parent.provenance})",
            labels,
            implicit=implicit or parent.implicit,
        )
        self.parent = parent
        self.kind = kind
        self._forward_map = forward_map

    def map_point(self, p: PointLike, parent_jet: Optional[Jet2] = None) -> np.ndarray:
        """Image of a parent-domain point in this field's variables"""
        x = as_array(p)
        if parent_jet is None:
            parent_jet = self.parent.jet_at(x)
        return np.asarray(self._forward_map(x, parent_jet), dtype=float)

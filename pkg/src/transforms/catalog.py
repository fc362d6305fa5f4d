"""
ThermoCheck Chain Catalog
Named transformation chains starting from the fundamental form u(v,s)
"""

from typing import Dict, List, Optional, Sequence

from src.core.errors import ConfigError
from src.eos.eos_factory import BaseEOS
from src.transforms.affine import flip_signs
from src.transforms.chain import ChainSpec, TransformKind, TransformRecord

DEFAULT_MASS = 2.0

CHAIN_DESCRIPTIONS: Dict[str, str] = {
    "specific-gibbs": "u(v,s) -> G(-p,theta) -> g(p,theta)",
    "specific-legendre-dual": "u(v,s) -> u_hat(-p,theta)",
    "specific-entropy": "u(v,s) -> s(v,u) -> s_hat(p/theta,1/theta)",
    "extensive-entropy": "u(v,s) -> U(V,S) -> S(V,U)",
    "mass-scaling": "u(v,s) -> U(V,S) -> S(V,U) -> s(v,u)",
    "internal-energy-density": "u(v,s) -> U_bar(rho,S_bar) -> S_bar(rho,U_bar)",
    "energy-density": "u(v,s) -> e(v,v_bar,s) -> E_bar(rho,M_bar,S_bar)",
    "entropy-density-exchange": "u(v,s) -> e(v,v_bar,s) -> E_bar(rho,M_bar,S_bar) -> S_bar(rho,M_bar,E_bar)",
    "entropy-density-reciprocal": "u(v,s) -> e(v,v_bar,s) -> s(v,v_bar,e) -> S_bar(rho,M_bar,E_bar)",
    "godunov": "u(v,s) -> e -> L_hat(-p,v_bar,theta) -> p(-L_hat,v_bar,theta) -> L(-L_hat/theta,v_bar/theta,-1/theta)",
}


def chain_catalog() -> List[str]:
    return list(CHAIN_DESCRIPTIONS)


def default_velocity(d: int) -> List[float]:
    return [0.3, -0.2, 0.1][:d]


def _mass_records(eos: BaseEOS, mass: float, back: bool) -> List[TransformRecord]:
    ref = eos.reference
    records = [
        TransformRecord(
            TransformKind.AFFINE,
            label="U(V,S)",
            expect="positive_definite",
            matrix=((1.0 / mass, 0.0), (0.0, 1.0 / mass)),
            factor=mass,
        ),
        TransformRecord(
            TransformKind.EXCHANGE,
            label="S(V,U)",
            expect="negative_definite",
            pivot_index=2,
            pivot_sign=1.0,
            seed=(mass * ref.s,),
        ),
    ]
    if back:
        records.append(
            TransformRecord(
                TransformKind.AFFINE,
                label="s(v,u)",
                expect="negative_definite",
                matrix=((mass, 0.0), (0.0, mass)),
                factor=1.0 / mass,
            )
        )
    return records


def _kinetic(velocity: Sequence[float]) -> TransformRecord:
    return TransformRecord(
        TransformKind.ADD_KINETIC,
        label="e(v,v_bar,s)",
        expect="positive_definite",
        velocity=tuple(velocity),
        position=1,
    )


def _energy_density(velocity: Sequence[float]) -> List[TransformRecord]:
    return [
        _kinetic(velocity),
        TransformRecord(
            TransformKind.RECIPROCAL,
            label="E_bar(rho,M_bar,S_bar)",
            expect="positive_definite",
            pivot_index=1,
            pivot_sign=1.0,
        ),
    ]


def _godunov(eos: BaseEOS, d: int, velocity: Sequence[float]) -> List[TransformRecord]:
    ref = eos.reference
    m = d + 2
    first = tuple(flip_signs(m, 1).tolist())
    last = tuple(flip_signs(m, m).tolist())
    return [
        _kinetic(velocity),
        TransformRecord(
            TransformKind.LEGENDRE,
            label="L_hat(-p,v_bar,theta)",
            expect="positive_definite",
            seed=(ref.v,) + (0.0,) * d + (ref.s,),
        ),
        TransformRecord(TransformKind.SIGN_FLIP, label="L_hat(p,v_bar,theta)", expect="positive_definite", signs=first),
        # L_hat_p = -v < 0, so the exchange keeps convexity
        TransformRecord(
            TransformKind.EXCHANGE,
            label="p(L_hat,v_bar,theta)",
            expect="positive_definite",
            pivot_index=1,
            pivot_sign=-1.0,
            seed=(ref.p / ref.theta,),
            seed_scale_index=m,
        ),
        TransformRecord(TransformKind.SIGN_FLIP, label="p(-L_hat,v_bar,theta)", expect="positive_definite", signs=first),
        TransformRecord(
            TransformKind.RECIPROCAL,
            label="L(-L_hat/theta,v_bar/theta,1/theta)",
            expect="positive_definite",
            pivot_index=m,
            pivot_sign=1.0,
        ),
        TransformRecord(
            TransformKind.SIGN_FLIP,
            label="L(-L_hat/theta,v_bar/theta,-1/theta)",
            expect="positive_definite",
            signs=last,
        ),
    ]


def build_chain(
    name: str,
    eos: BaseEOS,
    d: int = 3,
    velocity: Optional[Sequence[float]] = None,
    mass: float = DEFAULT_MASS,
) -> ChainSpec:
    """Chain spec by catalog name, with seeds taken from the EOS reference state"""
    if name not in CHAIN_DESCRIPTIONS:
        raise ConfigError(f"Unknown chain: {name} (known: {', '.join(CHAIN_DESCRIPTIONS)})")
    if d not in (1, 2, 3):
        raise ConfigError(f"Space dimension must be 1, 2 or 3, got {d}")
    vel = tuple(default_velocity(d) if velocity is None else velocity)
    if len(vel) != d:
        raise ConfigError(f"Velocity has {len(vel)} components, expected {d}")
    ref = eos.reference
    m = d + 2

    if name == "specific-gibbs":
        records = [
            TransformRecord(
                TransformKind.LEGENDRE_CONCAVE, label="G(-p,theta)", expect="negative_definite", seed=(ref.v, ref.s)
            ),
            TransformRecord(
                TransformKind.SIGN_FLIP,
                label="g(p,theta)",
                expect="negative_definite",
                signs=tuple(flip_signs(2, 1).tolist()),
            ),
        ]
    elif name == "specific-legendre-dual":
        records = [
            TransformRecord(TransformKind.LEGENDRE, label="u_hat(-p,theta)", expect="positive_definite", seed=(ref.v, ref.s))
        ]
    elif name == "specific-entropy":
        records = [
            TransformRecord(
                TransformKind.EXCHANGE, label="s(v,u)", expect="negative_definite", pivot_index=2, pivot_sign=1.0, seed=(ref.s,)
            ),
            TransformRecord(
                TransformKind.LEGENDRE,
                label="s_hat(p/theta,1/theta)",
                expect="negative_definite",
                seed=(ref.v, ref.u),
            ),
        ]
    elif name == "extensive-entropy":
        records = _mass_records(eos, mass, back=False)
    elif name == "mass-scaling":
        records = _mass_records(eos, mass, back=True)
    elif name == "internal-energy-density":
        records = [
            TransformRecord(
                TransformKind.RECIPROCAL, label="U_bar(rho,S_bar)", expect="positive_definite", pivot_index=1, pivot_sign=1.0
            ),
            TransformRecord(
                TransformKind.EXCHANGE,
                label="S_bar(rho,U_bar)",
                expect="negative_definite",
                pivot_index=2,
                pivot_sign=1.0,
                seed=(ref.s,),
                seed_scale_index=1,
            ),
        ]
    elif name == "energy-density":
        records = _energy_density(vel)
    elif name == "entropy-density-exchange":
        records = _energy_density(vel) + [
            TransformRecord(
                TransformKind.EXCHANGE,
                label="S_bar(rho,M_bar,E_bar)",
                expect="negative_definite",
                pivot_index=m,
                pivot_sign=1.0,
                seed=(ref.s,),
                seed_scale_index=1,
            )
        ]
    elif name == "entropy-density-reciprocal":
        records = [
            _kinetic(vel),
            TransformRecord(
                TransformKind.EXCHANGE,
                label="s(v,v_bar,e)",
                expect="negative_definite",
                pivot_index=m,
                pivot_sign=1.0,
                seed=(ref.s,),
            ),
            TransformRecord(
                TransformKind.RECIPROCAL,
                label="S_bar(rho,M_bar,E_bar)",
                expect="negative_definite",
                pivot_index=1,
                pivot_sign=1.0,
            ),
        ]
    else:
        records = _godunov(eos, d, vel)

    return ChainSpec(
        name=name,
        records=tuple(records),
        start_label="u(v,s)",
        start_expect="positive_definite",
        description=CHAIN_DESCRIPTIONS[name],
    )

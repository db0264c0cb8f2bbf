"""Experiment presets bundling objective, domain, architecture and protocol."""
from __future__ import annotations

from dataclasses import dataclass

from .domain import BoxDomain
from .objectives import Objective, builtin
from .resnet import architecture_ackley, architecture_dropwave, architecture_multimin


@dataclass(frozen=True)
class Preset:
    name: str
    train_domain: BoxDomain
    eval_domain: BoxDomain
    eval_n: int
    default_m: int
    architecture: callable  # (seed, width_scale) -> ResNet

    @property
    def objective(self) -> Objective:
        return builtin(self.name)


PRESETS = {
    "ackley": Preset(
        name="ackley",
        train_domain=BoxDomain.cube(-4.0, 4.0, 2),
        eval_domain=BoxDomain.cube(-5.0, 5.0, 2),
        eval_n=1000,
        default_m=2000,
        architecture=architecture_ackley,
    ),
    "dropwave": Preset(
        name="dropwave",
        train_domain=BoxDomain.cube(-5.12, 5.12, 2),
        eval_domain=BoxDomain.cube(-5.12, 5.12, 2),
        eval_n=1500,
        default_m=2000,
        architecture=architecture_dropwave,
    ),
    "multimin": Preset(
        name="multimin",
        train_domain=BoxDomain.cube(-3.0, 3.0, 3),
        eval_domain=BoxDomain.cube(-3.0, 3.0, 3),
        eval_n=1500,
        default_m=4000,
        architecture=architecture_multimin,
    ),
}


def preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(
            f"unknown preset {name!r}; presets are: {', '.join(sorted(PRESETS))}"
        ) from None

"""Parameter sets behind the published band diagrams."""
from dataclasses import dataclass

from qpbands.errors import DomainError
from qpbands.params import DimensionlessParams

FIGURE_BETA = {"fig3": 0.1, "fig4": 0.2, "fig5": 0.5}
PANEL_GAMMA = {"a": 0.2, "b": 1.0, "c": 5.0, "d": 10.0}

PRESET_BETAS = tuple(FIGURE_BETA.values())
PRESET_GAMMAS = tuple(PANEL_GAMMA.values())
PRESET_COMBOS = tuple((b, g) for b in PRESET_BETAS for g in PRESET_GAMMAS)


@dataclass(frozen=True)
class FigurePreset:
    figure: str
    panel: str

    def __post_init__(self):
        if self.figure not in FIGURE_BETA or self.panel not in PANEL_GAMMA:
            raise DomainError(f"unknown preset {self.figure}{self.panel}")

    @classmethod
    def parse(cls, name: str) -> "FigurePreset":
        name = name.strip().lower()
        if len(name) != 5:
            raise DomainError(f"preset must look like fig3a..fig5d, got {name!r}")
        return cls(name[:4], name[4])

    @property
    def name(self) -> str:
        return self.figure + self.panel

    @property
    def params(self) -> DimensionlessParams:
        return DimensionlessParams(FIGURE_BETA[self.figure], PANEL_GAMMA[self.panel])


ALL_PRESETS = tuple(FigurePreset(f, p) for f in FIGURE_BETA for p in PANEL_GAMMA)

"""
Service for registered parametrized families
"""
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError as PydanticValidationError

from src.models.family import ParamFamily
from src.models.ifs import IFSSystem
from src.models.similitude import Similitude
from src.services.ifs import SystemService
from src.utils.helpers import DomainError, ValidationError
from .interfaces import FamilyInterface

logger = logging.getLogger(__name__)

# Default domain boxes; translation families size theirs from the constants
DEFAULT_DOMAINS: Dict[str, Tuple[List[float], List[float]]] = {
    "bernoulli": ([0.5, 0.5], [0.7, 0.7]),
    "fat-sierpinski": ([0.35], [0.75]),
    "interpolation": ([0.0], [1.0]),
}


class FamilyService(FamilyInterface):
    """
    Registered families

    bernoulli: t = (beta, gamma), {beta x, gamma x + 1}
    fat-sierpinski: t = (lambda,)
    translation-family: fixed ratios r_i and orthogonal parts U_i, t = the
        translations a_1, ..., a_k flattened
    interpolation: t = (s,), ratios and translations linear in s between two
        systems with matching sizes and orthogonal parts
    """

    def __init__(self, system_service: Optional[SystemService] = None):
        self.system_service = system_service or SystemService()
        self._builders: Dict[str, Callable[[ParamFamily, np.ndarray], IFSSystem]] = {
            "bernoulli": self._bernoulli,
            "fat-sierpinski": self._fat_sierpinski,
            "translation-family": self._translation,
            "interpolation": self._interpolation,
        }

    @property
    def names(self) -> List[str]:
        return sorted(self._builders)

    def make(self, family_id: str, lower: Optional[Sequence[float]] = None,
             upper: Optional[Sequence[float]] = None,
             constants: Optional[Dict[str, Any]] = None) -> ParamFamily:
        """
        Builds a validated family

        Args:
            family_id: Registered identifier
            lower: Lower domain corner (registered default when omitted)
            upper: Upper domain corner (registered default when omitted)
            constants: Fixed family data

        Returns:
            ParamFamily

        Raises:
            ValidationError: Unknown family, malformed constants or a domain
                on which the family leaves the contractions
        """
        if family_id not in self._builders:
            raise ValidationError(f"unknown family '{family_id}'; known: {', '.join(self.names)}")
        constants = dict(constants or {})
        if lower is None or upper is None:
            default_lower, default_upper = self._default_domain(family_id, constants)
            lower = default_lower if lower is None else lower
            upper = default_upper if upper is None else upper
        try:
            family = ParamFamily(family_id=family_id, lower=list(lower), upper=list(upper), constants=constants)
        except PydanticValidationError as e:
            raise ValidationError(f"invalid family domain: {e}")
        self._check_domain(family)
        return family

    def _default_domain(self, family_id: str, constants: Dict[str, Any]) -> Tuple[List[float], List[float]]:
        if family_id == "translation-family":
            ratios, _, d = self._translation_constants(constants)
            m = len(ratios) * d
            return [0.0] * m, [1.0] * m
        return DEFAULT_DOMAINS[family_id]

    def _check_domain(self, family: ParamFamily) -> None:
        expected = {"bernoulli": 2, "fat-sierpinski": 1, "interpolation": 1}.get(family.family_id)
        if family.family_id == "translation-family":
            ratios, _, d = self._translation_constants(family.constants)
            expected = len(ratios) * d
        if family.m != expected:
            raise ValidationError(f"{family.family_id} takes {expected} parameter(s), domain has {family.m}")
        if family.family_id in ("bernoulli", "fat-sierpinski"):
            if min(family.lower) <= 0.0 or max(family.upper) >= 1.0:
                raise ValidationError(f"{family.family_id} needs a domain inside (0, 1)")
        if family.family_id == "interpolation":
            if family.lower[0] < 0.0 or family.upper[0] > 1.0:
                raise ValidationError("interpolation parameter must lie in [0, 1]")
            self._endpoints(family)

    def build(self, family: ParamFamily, t: Sequence[float]) -> IFSSystem:
        """
        The system at parameter t

        Raises:
            DomainError: t outside the domain box
        """
        t = np.asarray(t, dtype=float)
        if not family.contains(t):
            raise DomainError(f"parameter {t.tolist()} outside the domain of {family.family_id}")
        return self._builders[family.family_id](family, t)

    def _bernoulli(self, family: ParamFamily, t: np.ndarray) -> IFSSystem:
        return self.system_service.build("bernoulli", t)

    def _fat_sierpinski(self, family: ParamFamily, t: np.ndarray) -> IFSSystem:
        return self.system_service.build("fat-sierpinski", t)

    @staticmethod
    def _translation_constants(constants: Dict[str, Any]) -> Tuple[List[float], List[np.ndarray], int]:
        try:
            ratios = [float(r) for r in constants["ratios"]]
            d = int(constants.get("d", 1))
            Us = [np.asarray(U, dtype=float) for U in constants.get("U", [np.eye(d)] * len(ratios))]
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"translation-family needs 'ratios' (and optionally 'd', 'U'): {e}")
        if not ratios or len(Us) != len(ratios) or any(U.shape != (d, d) for U in Us):
            raise ValidationError("translation-family needs one d x d orthogonal part per ratio")
        if any(not 0.0 < r < 1.0 for r in ratios):
            raise ValidationError("translation-family ratios must lie in (0, 1)")
        return ratios, Us, d

    def _translation(self, family: ParamFamily, t: np.ndarray) -> IFSSystem:
        ratios, Us, d = self._translation_constants(family.constants)
        shifts = t.reshape(len(ratios), d)
        maps = [Similitude.from_ratio(r, U, a) for r, U, a in zip(ratios, Us, shifts)]
        probs = family.constants.get("probs", np.full(len(ratios), 1.0 / len(ratios)))
        return IFSSystem(name="translation-family", maps=maps, probs=probs)

    def _resolve(self, source: Any) -> IFSSystem:
        if isinstance(source, dict):
            return self.system_service.from_json(source)
        return self.system_service.get(str(source))

    def _endpoints(self, family: ParamFamily) -> Tuple[IFSSystem, IFSSystem]:
        try:
            start = self._resolve(family.constants["start"])
            end = self._resolve(family.constants["end"])
        except KeyError as e:
            raise ValidationError(f"interpolation needs 'start' and 'end' systems: missing {e}")
        if start.size != end.size or start.d != end.d:
            raise ValidationError("interpolated systems must have the same number of maps and dimension")
        if any(not np.allclose(g.U, h.U, atol=1e-12) for g, h in zip(start.maps, end.maps)):
            raise ValidationError("interpolated systems must share their orthogonal parts")
        return start, end

    def _interpolation(self, family: ParamFamily, t: np.ndarray) -> IFSSystem:
        start, end = self._endpoints(family)
        s = float(t[0])
        maps = [
            Similitude.from_ratio((1.0 - s) * g.r + s * h.r, g.U, (1.0 - s) * g.a + s * h.a)
            for g, h in zip(start.maps, end.maps)
        ]
        probs = (1.0 - s) * start.probs + s * end.probs
        return IFSSystem(name=f"interpolation({s:g})", maps=maps, probs=probs / probs.sum())

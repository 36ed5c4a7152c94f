"""
Service for built-in and file-defined iterated function systems
"""
import logging
import re
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from src.models.ifs import IFSSystem
from src.models.similitude import Similitude
from src.utils.helpers import ValidationError
from .interfaces import SystemCatalogInterface

logger = logging.getLogger(__name__)

NAME_PATTERN = re.compile(r"^\s*([a-z0-9\-]+)\s*(?:\((.*)\))?\s*$")


def _real_root(coefficients: Sequence[float], low: float, high: float) -> float:
    """Real root in [low, high] of a polynomial, polished by Newton steps"""
    poly = np.poly1d(coefficients)
    roots = [z.real for z in np.roots(coefficients) if abs(z.imag) < 1e-9 and low <= z.real <= high]
    if not roots:
        raise ValueError(f"no real root in [{low}, {high}]")
    x = roots[0]
    derivative = poly.deriv()
    for _ in range(3):
        x -= poly(x) / derivative(x)
    return float(x)


def garsia_root() -> float:
    """The root in (1, 2) of t**3 - t**2 - 2"""
    return _real_root([1.0, -1.0, 0.0, -2.0], 1.0, 2.0)


def fat_sierpinski_threshold() -> float:
    """Real root of x**3 - x**2 + x = 1/2, above which the fat gasket has interior"""
    return _real_root([1.0, -1.0, 1.0, -0.5], 0.0, 1.0)


def similarity_dimension(ratios: Sequence[float], tol: float = 1e-12) -> float:
    """The s >= 0 with sum r_i**s = 1, by bisection"""
    ratios = np.asarray(ratios, dtype=float)
    low, high = 0.0, 1.0
    while np.sum(ratios ** high) > 1.0:
        high *= 2.0
    while high - low > tol:
        mid = (low + high) / 2.0
        if np.sum(ratios ** mid) > 1.0:
            low = mid
        else:
            high = mid
    return (low + high) / 2.0


def natural_probs(ratios: Sequence[float]) -> np.ndarray:
    """p_i = r_i**s with s the similarity dimension, renormalized against rounding"""
    s = similarity_dimension(ratios)
    p = np.asarray(ratios, dtype=float) ** s
    return p / p.sum()


def _rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


class SystemService(SystemCatalogInterface):
    """
    Catalog of named systems

    Names: cantor3, garsia, garsia-product, fat-sierpinski(lambda),
    bernoulli(beta,gamma).
    """

    def __init__(self):
        self._builders: Dict[str, Callable[[List[float]], IFSSystem]] = {
            "cantor3": self._cantor3,
            "garsia": self._garsia,
            "garsia-product": self._garsia_product,
            "fat-sierpinski": self._fat_sierpinski,
            "bernoulli": self._bernoulli,
        }

    @property
    def names(self) -> List[str]:
        return sorted(self._builders)

    def get(self, name: str) -> IFSSystem:
        """
        Resolves a built-in system

        Args:
            name: Identifier, optionally with a parenthesized argument list

        Returns:
            The IFSSystem

        Raises:
            ValidationError: Unknown name or malformed arguments
        """
        match = NAME_PATTERN.match(name)
        if not match or match.group(1) not in self._builders:
            raise ValidationError(f"unknown system '{name}'; known: {', '.join(self.names)}")
        try:
            args = [float(x) for x in match.group(2).split(",")] if match.group(2) else []
            return self._builders[match.group(1)](args)
        except (ValueError, TypeError) as e:
            logger.error(f"Invalid system definition '{name}': {e}")
            raise ValidationError(f"invalid system '{name}': {e}")

    def build(self, family: str, args: Sequence[float]) -> IFSSystem:
        """Builds a named system from numeric arguments without going through the name parser"""
        if family not in self._builders:
            raise ValidationError(f"unknown system '{family}'; known: {', '.join(self.names)}")
        try:
            return self._builders[family]([float(x) for x in args])
        except (ValueError, TypeError) as e:
            logger.error(f"Invalid arguments {list(args)} for {family}: {e}")
            raise ValidationError(f"invalid arguments for {family}: {e}")

    @staticmethod
    def _expect(args: List[float], count: int, name: str) -> None:
        if len(args) != count:
            raise ValueError(f"{name} takes {count} argument(s), got {len(args)}")

    def _cantor3(self, args: List[float]) -> IFSSystem:
        self._expect(args, 0, "cantor3")
        third = Fraction(1, 3)
        maps = [Similitude.from_exact(third, [[1]], [0]), Similitude.from_exact(third, [[1]], [Fraction(2, 3)])]
        return IFSSystem(name="cantor3", maps=maps, probs=[0.5, 0.5])

    def _garsia(self, args: List[float]) -> IFSSystem:
        self._expect(args, 0, "garsia")
        r = 1.0 / garsia_root()
        maps = [Similitude.from_ratio(r, [[1.0]], [-1.0]), Similitude.from_ratio(r, [[1.0]], [1.0])]
        return IFSSystem(name="garsia", maps=maps, probs=[0.5, 0.5])

    def _garsia_product(self, args: List[float]) -> IFSSystem:
        """(x, y) -> (phi x, psi y), phi a third-level Garsia composition, psi in {r**3 y +- 1}"""
        self._expect(args, 0, "garsia-product")
        r = 1.0 / garsia_root()
        signs = (-1.0, 1.0)
        maps = []
        for ci in signs:
            for cj in signs:
                for ck in signs:
                    # phi_i o phi_j o phi_k (x) = r^3 x + r^2 c_k + r c_j + c_i
                    shift_x = r * r * ck + r * cj + ci
                    for shift_y in signs:
                        maps.append(Similitude.from_ratio(r ** 3, np.eye(2), [shift_x, shift_y]))
        return IFSSystem(name="garsia-product", maps=maps, probs=np.full(16, 1.0 / 16.0))

    def _fat_sierpinski(self, args: List[float]) -> IFSSystem:
        """x -> lambda U x + (1 - lambda) v_i, U the rotation by 2 pi / 3"""
        self._expect(args, 1, "fat-sierpinski")
        lam = args[0]
        if not 0.0 < lam < 1.0:
            raise ValueError("lambda must lie in (0, 1)")
        U = _rotation(2.0 * np.pi / 3.0)
        vertices = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3.0) / 2.0]])
        maps = [Similitude.from_ratio(lam, U, (1.0 - lam) * v) for v in vertices]
        return IFSSystem(name=f"fat-sierpinski({lam:g})", maps=maps, probs=natural_probs([lam] * 3))

    def _bernoulli(self, args: List[float]) -> IFSSystem:
        """{beta x, gamma x + 1} with the natural probabilities"""
        self._expect(args, 2, "bernoulli")
        beta, gamma = args
        maps = [Similitude.from_ratio(beta, [[1.0]], [0.0]), Similitude.from_ratio(gamma, [[1.0]], [1.0])]
        return IFSSystem(name=f"bernoulli({beta:g},{gamma:g})", maps=maps, probs=natural_probs([beta, gamma]))

    def from_json(self, data: Dict[str, Any]) -> IFSSystem:
        """
        Parses an IFS file

        Args:
            data: {"d": int, "maps": [{t|r, U, a}, ...], "probs": [...] (optional, uniform by default)}

        Returns:
            IFSSystem

        Raises:
            ValidationError: Missing fields or invalid maps
        """
        try:
            maps = [Similitude.from_json(item) for item in data["maps"]]
            if "d" in data and any(g.d != int(data["d"]) for g in maps):
                raise ValueError(f"maps do not act on R^{data['d']}")
            probs = data.get("probs")
            if probs is None:
                probs = np.full(len(maps), 1.0 / len(maps))
            return IFSSystem(name=str(data.get("name", "custom")), maps=maps, probs=probs)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            logger.error(f"Invalid IFS definition: {e}")
            raise ValidationError(f"invalid IFS definition: {e}")

    def resolve(self, source: str, loader: Optional[Callable[[str], Dict[str, Any]]] = None) -> IFSSystem:
        """A built-in name, or a JSON file path when loader is given and the name is unknown"""
        match = NAME_PATTERN.match(source)
        if match and match.group(1) in self._builders:
            return self.get(source)
        if loader is None:
            raise ValidationError(f"unknown system '{source}'")
        return self.from_json(loader(source))

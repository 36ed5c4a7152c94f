"""
Service for inverse-theorem verdicts
Per-level subspace structure behind entropy growth under convolution and the isometry action
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from src.config.settings import settings
from src.models.measure import LatticeMeasure, SimMeasure
from src.models.similitude import Similitude
from src.models.subspace import Subspace
from src.models.verdict import IsometryVerdict, PairVerdict, Verdict
from src.services.measure import MeasureService
from src.services.subspace import SubspaceSelectorService
from src.utils.helpers import NonIsometryError, ResolutionError
from .interfaces import VerdictInterface
from .measure_subspace_service import MeasureSubspaceService
from .predicate_service import PredicateService

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: int) -> List[R]:
    """Maps fn over items, in a thread pool when threads > 1, keeping input order"""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


class VerdictService(VerdictInterface):
    """
    Observed inverse-theorem structure

    Verdicts report the measured structure; they do not decide the
    theorem's threshold functions.
    """

    def __init__(
        self,
        measure_service: MeasureService,
        predicates: PredicateService,
        measure_subspaces: MeasureSubspaceService,
        selector: SubspaceSelectorService,
    ):
        self.measure_service = measure_service
        self.predicates = predicates
        self.measure_subspaces = measure_subspaces
        self.selector = selector

    def _level_subspace(self, nu: LatticeMeasure, i: int, eps: float) -> Tuple[Subspace, list]:
        components = self.measure_service.components(nu, i)
        ranked = sorted(components, key=lambda item: -item[1])
        family, covered = [], 0.0
        for _, mass, comp in ranked:
            if comp.size == 1:
                family.append(Subspace.zero(nu.d))
            else:
                family.append(self.measure_subspaces.concentration_subspace(comp, eps, cascade=False)[0])
            covered += mass
            if covered >= 1.0 - eps / 2.0:
                break
        V, _ = self.selector.minimal_engulfing(family, eps)
        return V, components

    def _level(self, mu: LatticeMeasure, nu: LatticeMeasure, i: int, eps: float, m: int):
        V, nu_components = self._level_subspace(nu, i, eps)
        conc = sum(mass for _, mass, comp in nu_components
                   if V.k == nu.d or self.predicates.is_concentrated(comp, V, eps)[0])

        scale = min(m, mu.L - i)
        sat = 0.0
        for _, mass, comp in self.measure_service.components(mu, i):
            if V.k == 0:
                sat += mass
            elif scale > 0 and self.predicates.is_saturated(comp, V, eps, scale):
                sat += mass
        return V, min(sat, 1.0), min(conc, 1.0)

    def inverse_verdict(self, mu: LatticeMeasure, nu: LatticeMeasure, n: int, eps: float, m: int,
                        threads: Optional[int] = None) -> Verdict:
        """
        Structure of mu and nu behind the entropy growth of mu * nu

        Args:
            mu: Lattice measure
            nu: Lattice measure of the same dimension
            n: Top level, n <= L
            eps: Tolerance in (0, 1)
            m: Saturation scale, m <= L - n recommended
            threads: Worker count for the per-level loop

        Returns:
            Verdict with V_0..V_n, the saturated mass of mu-components and the
            concentrated mass of nu-components averaged over levels 0..n
        """
        if not 0 < eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if n > min(mu.L, nu.L):
            raise ResolutionError(f"level {n} exceeds the lattice resolution {min(mu.L, nu.L)}")
        if m > mu.L - n:
            logger.warning(f"Saturation scale {m} exceeds L - n = {mu.L - n}; deep levels use a clipped scale")

        before = self.measure_service.normalized_entropy(mu, n)
        after = self.measure_service.normalized_entropy(self.measure_service.convolve(mu, nu), n)

        workers = settings.THREADS if threads is None else threads
        levels = ordered_map(lambda i: self._level(mu, nu, i, eps, m), range(n + 1), workers)
        subspaces = [V for V, _, _ in levels]
        sat = float(np.mean([s for _, s, _ in levels]))
        conc = float(np.mean([c for _, _, c in levels]))
        return Verdict(
            n=n,
            epsilon=eps,
            m=m,
            entropy_before=before,
            entropy_after=after,
            growth=after - before,
            subspaces=subspaces,
            sat_fraction=sat,
            conc_fraction=conc,
            mean_dim=float(np.mean([V.k for V in subspaces])),
            passed=sat > 1.0 - eps and conc > 1.0 - eps,
        )

    def _pair(self, nu_part: SimMeasure, mu_part: LatticeMeasure, weight: float, k: int, n: int,
              eps: float, m: int) -> PairVerdict:
        x0 = mu_part.centers()[int(np.argmax(mu_part.weights))]
        heaviest = int(np.argmax(nu_part.weights))
        U0 = nu_part.Us[heaviest]
        L_inner = mu_part.L - k
        scale = 2.0 ** k

        # mu role: S_k U_0 (x - x_0)
        g = Similitude(t=-float(k), U=U0, a=-scale * (U0 @ x0))
        mu_inner = self.measure_service.pushforward(g, mu_part, L_inner)

        # nu role: S_k (nu~.x_0) recentred at the image of the heaviest atom
        images = (2.0 ** (-nu_part.ts))[:, None] * np.einsum("gij,j->gi", nu_part.Us, x0) + nu_part.As
        nu_inner = self.measure_service.make_lattice(scale * (images - images[heaviest]), nu_part.weights, L_inner)

        n_inner = max(0, min(n, L_inner - m))
        verdict = self.inverse_verdict(mu_inner, nu_inner, n_inner, eps, m, threads=1)
        mapped = [Subspace.span((U0.T @ V.frame).T, V.d) for V in verdict.subspaces]
        return PairVerdict(weight=weight, base_point=x0, verdict=verdict, subspaces=mapped)

    def isometry_verdict(self, nu: SimMeasure, mu: LatticeMeasure, k: int, n: int, eps: float, m: int,
                         threads: Optional[int] = None) -> IsometryVerdict:
        """
        Linearized verdicts for the action of isometries

        Each pair of a level-k component of nu in D_k^G and a level-k component
        of mu is reduced to a Euclidean verdict for S_k U_0 (mu~ - x_0) and
        S_k (nu~.x_0), where x_0 is the heaviest cell center of mu~ and U_0 the
        orthogonal part of the heaviest atom of nu~.

        Args:
            nu: Measure on G whose atoms are isometries
            mu: Lattice measure
            k: Component level, k <= L
            n: Top level of the inner verdicts
            eps: Tolerance in (0, 1)
            m: Saturation scale
            threads: Worker count for the pair loop

        Returns:
            IsometryVerdict with mass-weighted pass rate and mean dimension

        Raises:
            NonIsometryError: Some atom of nu has t != 0
        """
        if np.any(np.abs(nu.ts) > settings.EXACT_TOL):
            logger.error("Isometry verdict requested for a measure with contracting atoms")
            raise NonIsometryError("all atoms of nu must be isometries (t = 0)")
        if k > mu.L or n > mu.L:
            raise ResolutionError(f"levels k={k}, n={n} must not exceed the lattice resolution {mu.L}")

        before = self.measure_service.normalized_entropy(mu, n)
        after = self.measure_service.normalized_entropy(self.measure_service.group_action(nu, mu, mu.L), n)
        group_entropy = self.measure_service.entropy_on_G(nu, n) / max(n, 1)

        jobs = [
            (nu_part, mu_part, nu_mass * mu_mass)
            for nu_mass, nu_part in self.measure_service.group_service.group_components(nu, k)
            for _, mu_mass, mu_part in self.measure_service.components(mu, k, rescaled=False)
        ]
        logger.info(f"Isometry verdict over {len(jobs)} component pairs at level {k}")
        workers = settings.THREADS if threads is None else threads
        pairs = ordered_map(lambda job: self._pair(job[0], job[1], job[2], k, n, eps, m), jobs, workers)

        pass_rate = sum(p.weight for p in pairs if p.verdict.passed)
        mean_dim = sum(p.weight * p.verdict.mean_dim for p in pairs)
        return IsometryVerdict(
            n=n,
            k=k,
            growth=after - before,
            entropy_before=before,
            entropy_after=after,
            group_entropy=group_entropy,
            pairs=pairs,
            pass_rate=float(min(pass_rate, 1.0)),
            mean_dim=float(mean_dim),
            dim_bound=settings.ISOMETRY_DIM_CONSTANT * group_entropy,
        )

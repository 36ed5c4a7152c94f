import numpy as np
import pytest

from src.services.ifs import IFSService
from src.services.measure import MeasureService
from src.services.satcon import (
    AffineService,
    KVService,
    MeasureSubspaceService,
    PredicateService,
    VerdictService,
)
from src.services.scan import ParamScanService
from src.services.similitude import SimilitudeService
from src.services.subspace import SubspaceGeometryService, SubspaceSelectorService

# {x/2, x/2 + 1/2, x/2 + 1} in exact form; overlaps at depth 2
OVERLAP_SYSTEM = {
    "name": "three-halves",
    "d": 1,
    "maps": [
        {"r": "1/2", "a": [0]},
        {"r": "1/2", "a": ["1/2"]},
        {"r": "1/2", "a": [1]},
    ],
}


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def sim():
    return SimilitudeService()


@pytest.fixture
def measures():
    return MeasureService()


@pytest.fixture
def lattice(measures):
    return measures.lattice_service


@pytest.fixture
def build(measures):
    return measures.construction_service


@pytest.fixture
def geometry():
    return SubspaceGeometryService()


@pytest.fixture
def selector(geometry):
    return SubspaceSelectorService(geometry)


@pytest.fixture
def predicates(lattice, geometry):
    return PredicateService(lattice, geometry)


@pytest.fixture
def measure_subspaces(predicates, geometry, measures):
    return MeasureSubspaceService(predicates, geometry, measures.moment_service)


@pytest.fixture
def kv(measures):
    return KVService(measures.lattice_service, measures.convolution_service)


@pytest.fixture
def affine(measures):
    return AffineService(measures.moment_service)


@pytest.fixture
def verdicts(measures, predicates, measure_subspaces, selector):
    return VerdictService(measures, predicates, measure_subspaces, selector)


@pytest.fixture
def ifs_service(measures):
    return IFSService(measures)


@pytest.fixture
def scans(ifs_service):
    return ParamScanService(ifs_service)


@pytest.fixture
def cantor3(ifs_service):
    return ifs_service.get_system("cantor3")


@pytest.fixture
def garsia(ifs_service):
    return ifs_service.get_system("garsia")


@pytest.fixture
def overlap_system(ifs_service):
    return ifs_service.system_from_json(OVERLAP_SYSTEM)


@pytest.fixture
def overlap_definition():
    return dict(OVERLAP_SYSTEM)

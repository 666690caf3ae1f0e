from modlie.config import Config
from modlie.error_handlers import ModLieError
from modlie.ffla import PrimeField, PrimeFieldMatrix
from modlie.liecore import LieAlgebra, Subspace
from modlie.cartan import build_from_family

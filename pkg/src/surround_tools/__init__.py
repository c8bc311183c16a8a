# init.py
from .config import get_global_logger
# initializing the logger before importing other modules.
# Python executes module-level code at import time.
# if any module logs a message as it is imported, the logger needs to be configured first.
# Ignore warning <PEP 8:E402 module level import not a top of file> for this specific case.

# This will ensure the logger is configured at the time of package import
get_global_logger()

__version__ = '0.1'

from . import graph_tools
from . import latin_tools
from . import family_tools
from . import game_tools
from . import solver_tools
from . import bound_tools
from . import strategy_tools
from . import scripted_tools
from . import file_tools
from . import df_tools
from . import table_tools
from . import helper
from .graph_tools import Graph, build_graph
from .game_tools import GameSpec, Variant
from .solver_tools import solve_fixed_k
from .bound_tools import cop_number

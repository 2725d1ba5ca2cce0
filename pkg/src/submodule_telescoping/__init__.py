from .factor_engine import TelescopeOptions
from .factor_engine import telescope

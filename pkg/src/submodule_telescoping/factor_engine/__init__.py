from .telescope import TelescopeOptions
from .telescope import telescope

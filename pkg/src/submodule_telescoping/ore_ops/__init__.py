from .operator import OreOp

from .context import ReductionContext

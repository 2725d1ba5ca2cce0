from .term import TermSpec

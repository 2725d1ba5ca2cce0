from .checks import VerificationReport

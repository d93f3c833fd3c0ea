"""Exception types shared across modules."""


class ConfigError(ValueError):
    """A configuration violates a hypothesis of the experiment it configures."""


class ConvergenceError(RuntimeError):
    """A numerical limit did not stabilise on the requested ladder."""


class ZeroMeanError(ValueError):
    """Non-Gaussian initial data G(eta_0) must be centred for scaling runs."""

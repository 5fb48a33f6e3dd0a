"""Exception types shared across the engine."""


class TeamRecError(Exception):
    """Base class for all engine errors."""


class EmptySkillError(TeamRecError):
    """A raw phrase normalized down to the empty string."""


class CorpusLoadError(TeamRecError):
    """Corpus file could not be parsed (carries file, line, column when known)."""


class ValidationError(TeamRecError):
    """Structural validation failed (duplicate ids, dangling codes, cycles)."""


class ConfigError(TeamRecError):
    """Invalid configuration value or weight combination."""


class InsufficientSupplyError(TeamRecError):
    """Not enough researchers in the corpus to form any team."""


class TrainingDataError(TeamRecError):
    """The weak-supervision policy produced no usable training examples."""

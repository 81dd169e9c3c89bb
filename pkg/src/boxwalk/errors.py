"""Exception types shared by the engines and the command-line front end."""


class ParameterError(ValueError):
    """A parameter lies outside its admissible domain."""


class ConservationError(RuntimeError):
    """The total number of balls/particles changed during an update.

    This signals a bug, never a user error; the CLI aborts with exit code 4.
    """

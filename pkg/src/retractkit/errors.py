class RetractKitError(Exception):
    """Base class for errors raised by the toolkit."""


class GroupTooLarge(RetractKitError):
    pass


class NotASubgroup(RetractKitError):
    pass


class NotNormal(RetractKitError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class BudgetExceeded(RetractKitError):
    def __init__(self, message, budget=None, done=None):
        super().__init__(message)
        self.budget = budget
        self.done = done


class WordSyntaxError(RetractKitError, ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos

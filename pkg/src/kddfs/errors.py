"""Exception types shared across the package."""


class KddfsError(Exception):
    """Base class. The CLI maps these to the data-error exit code."""


class MalformedRecordError(KddfsError, ValueError):
    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class UnknownCategoryError(KddfsError, ValueError):
    def __init__(self, names):
        self.names = sorted(set(names))
        super().__init__("unknown subcategory: " + ", ".join(self.names))


class DimensionError(KddfsError, ValueError):
    pass


class DegenerateClassError(KddfsError, ValueError):
    def __init__(self, class_name, context=""):
        self.class_name = class_name
        msg = f"class {class_name!r} has no samples"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class DegenerateFoldError(KddfsError, ValueError):
    def __init__(self, fold, class_name):
        self.fold = fold
        self.class_name = class_name
        super().__init__(f"fold {fold}: training split has no samples of class {class_name!r}")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BLOWUP = 3
EXIT_IO = 4


class StapdeError(RuntimeError):
    exit_code = EXIT_CONFIG


class ConfigurationError(StapdeError):
    exit_code = EXIT_CONFIG

    def __init__(self, key, reason):
        self.key = key
        self.reason = reason

    def __str__(self):
        return 'Invalid configuration for {!r}: {}'.format(self.key, self.reason)


class UsageError(StapdeError):
    exit_code = EXIT_CONFIG

    def __init__(self, operation, reason):
        self.operation = operation
        self.reason = reason

    def __str__(self):
        return '{} cannot proceed: {}'.format(self.operation, self.reason)


class BladeParseError(UsageError):
    def __init__(self, name, reason):
        super().__init__('parse_blade', reason)
        self.name = name

    def __str__(self):
        return 'Cannot parse blade {!r}: {}'.format(self.name, self.reason)


class NumericalBlowupError(StapdeError):
    exit_code = EXIT_BLOWUP

    def __init__(self, where, step, context=''):
        self.where = where
        self.step = step
        self.context = context

    def __str__(self):
        suffix = ' ({})'.format(self.context) if self.context else ''
        return 'Non-finite values detected in {} at step {}{}'.format(self.where, self.step, suffix)


class ContainerFormatError(StapdeError):
    exit_code = EXIT_IO

    def __init__(self, path, reason):
        self.path = path
        self.reason = reason

    def __str__(self):
        return 'File {!r} is not a valid container: {}'.format(str(self.path), self.reason)

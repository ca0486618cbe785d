class CheckResult:
    """Outcome of one declared check: the measured value against its threshold."""

    def __init__(self, name, passed, value, threshold):
        self.name = name
        self.passed = bool(passed)
        self.value = value
        self.threshold = threshold

    def to_json(self):
        return {"name": self.name, "passed": self.passed, "value": self.value, "threshold": self.threshold}

    def row(self):
        return [self.name, "PASS" if self.passed else "FAIL", self.value, self.threshold]

    @staticmethod
    def at_most(name, value, threshold):
        return CheckResult(name, value <= threshold, float(value), threshold)

    @staticmethod
    def equals(name, value, expected):
        return CheckResult(name, value == expected, value, expected)

import time

class TaskTimer:
    """Accumulates wall time per named phase of a run."""

    def __init__(self):
        self.timings = {}
        self.started = time.perf_counter()
        self.reset()

    def reset(self):
        self.last = time.perf_counter()

    def time(self, key):
        new_time = time.perf_counter()
        passed = new_time - self.last
        self.timings[key] = self.timings.get(key, 0.0) + passed
        self.last = new_time

        return passed

    def total(self):
        return time.perf_counter() - self.started

    def summary_lines(self):
        lines = [["Time usage " + key, value] for key, value in self.timings.items()]
        lines.append(["Wall time", self.total()])
        return lines

from checkResult import CheckResult
from frameBounds import ucp_certificate, vanishing_witness


def decay_ratio(rows):
    """d_minus(last N) / d_minus(first N), zero once the first value is clamped."""

    first, last = rows[0].d_minus, rows[-1].d_minus
    return last / first if first > 0 else 0.0


def interlacing_margin(rows, slack):
    """Smallest margin of d_minus non-increasing and d_plus non-decreasing; negative if violated."""

    margin = float("inf")
    for a, b in zip(rows, rows[1:]):
        area_slack = slack * a.domain_area
        margin = min(margin, a.d_minus_raw - b.d_minus_raw + area_slack, b.d_plus - a.d_plus + area_slack)
    return margin


class CertificateCommand:
    """Frame-bound certificates over nested truncations, one CSV table per relation."""

    def run(self, config, writer, timer, workers = 1, show_progress = False):

        section = config.certificate
        expected = config.checks
        domain = config.domain.build()

        checks = []
        summary = {}
        ratios = []

        for rel in config.relations():

            rows = ucp_certificate(rel, domain, section.N_list, show_progress)
            timer.time("Certificates")

            writer.write_csv("certificate_" + rel.name + ".csv", ["N", "d_minus_raw", "d_minus", "d_plus", "domain_area"], [r.row() for r in rows])

            ratio = decay_ratio(rows)
            ratios.append(ratio)
            summary[rel.name] = {"decay_ratio": ratio, "d_minus": [r.d_minus for r in rows]}

            if expected.interlacing is not None:
                margin = interlacing_margin(rows, expected.interlacing) if len(rows) > 1 else 0.0
                checks.append(CheckResult("interlacing " + rel.name, margin >= 0, margin, expected.interlacing))

            wanted = section.witness if section.witness is not None else [rel.name]
            if section.witness_N is not None and rel.name in wanted:
                witness, mass = vanishing_witness(rel, domain, section.witness_N)
                timer.time("Vanishing witness")

                writer.write_ndjson("witness_" + rel.name + ".ndjson", [witness.to_record()])
                summary[rel.name]["witness_mass"] = mass

                if expected.witness_mass is not None:
                    checks.append(CheckResult.at_most("witness mass " + rel.name, mass / domain.area(), expected.witness_mass))

        if expected.contrast is not None:
            # The second relation must decay at least `contrast` times faster than the first.
            value = ratios[1] * expected.contrast
            checks.append(CheckResult("certificate contrast", ratios[0] > 0 and value <= ratios[0], value, ratios[0]))

        return checks, summary

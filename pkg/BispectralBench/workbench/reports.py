"""Plain-text and key=value renderings of job reports."""

FORMATS = ("text", "structured")


def render_items(items, fmt="text", prefix=""):
    if fmt == "structured":
        return "\n".join(f"{prefix}{key}={value}" for key, value in items)
    width = max((len(key) for key, _ in items), default=0)
    return "\n".join(f"{prefix}{key.ljust(width)}  {value}" for key, value in items)


def _text_step(step):
    lines = [f"[{step.index}] {step.op}: {step.status}"]
    if step.items:
        lines.append(render_items(step.items, "text", prefix="    "))
    if step.message:
        lines.append(f"    ! {step.message}")
    return "\n".join(lines)


def _structured_step(step):
    prefix = f"step.{step.index}."
    items = [("op", step.op), ("status", step.status), *step.items]
    if step.message:
        items.append(("message", step.message))
    return render_items(items, "structured", prefix)


def render_report(report, fmt="text"):
    if fmt == "structured":
        head = [("job.name", report.name), ("job.status", report.status), ("job.steps", str(len(report.steps)))]
        blocks = [render_items(head, "structured")]
        blocks.extend(_structured_step(step) for step in report.steps)
        return "\n".join(blocks)
    title = f"job {report.name}: {report.status}"
    if report.description:
        title = f"{title}\n{report.description}"
    return "\n".join([title, *(_text_step(step) for step in report.steps)])

"""Report models shared by the scene runner, the CLI and the report sink.

Every number is carried as an exact rational string ("-8", "3/2").
"""

import uuid
from typing import Literal

from pydantic import BaseModel, Field


class PointRecord(BaseModel):
    """Local invariants of one singular point."""

    chart: int
    point: list[str]
    on_divisor: bool
    milnor: int
    bb: str
    res_log: str | None = None
    ind_log: int | None = None
    res_log_det: str | None = None
    contribution: str
    flags: list[str] = Field(default_factory=list)


class Certificate(BaseModel):
    """Completeness of the supplied singular-point list."""

    ok: bool
    milnor_total: int
    expected: int | None = None
    points: int
    reason: str = ""


class PoincareRecord(BaseModel):
    n: int
    deg_D: int
    deg_F: int
    total: str
    identity_value: str
    identity_holds: bool
    hypothesis_met: bool
    status: Literal["satisfied", "boundary", "violated", "hypothesis-not-met"]


class GlobalReport(BaseModel):
    """Local residue total against the Chern-side integral."""

    scene: str
    phi: str
    points: list[PointRecord]
    local_total: str
    chern_side: str
    difference: str
    verdict: Literal["equal", "mismatch"]
    certificate: Certificate
    status: Literal["verified", "mismatch", "uncertified"]
    poincare: PoincareRecord | None = None
    warnings: list[str] = Field(default_factory=list)
    log_type: Literal["global_report"] = "global_report"
    service_name: Literal["logbb"] = "logbb"
    run_id: str = Field(default_factory=lambda: str(uuid.uuid4()))

    @property
    def ok(self) -> bool:
        return self.status == "verified"

    def to_markdown(self) -> str:
        lines = [
            f"# {self.scene}: {self.phi}",
            "",
            "| chart | point | on D | mu | BB | Res^log | Ind_log | term |",
            "|---|---|---|---|---|---|---|---|",
        ]
        for p in self.points:
            lines.append(
                f"| {p.chart} | ({', '.join(p.point)}) | {'yes' if p.on_divisor else 'no'} "
                f"| {p.milnor} | {p.bb} | {p.res_log or ''} "
                f"| {'' if p.ind_log is None else p.ind_log} | {p.contribution} |"
            )
        expected = "?" if self.certificate.expected is None else self.certificate.expected
        lines += [
            "",
            f"- local total: {self.local_total}",
            f"- Chern side: {self.chern_side}",
            f"- verdict: {self.verdict} (difference {self.difference})",
            f"- completeness: {self.certificate.milnor_total} / {expected}"
            f" ({'ok' if self.certificate.ok else 'failed'})",
        ]
        if self.poincare is not None:
            lines.append(
                f"- degree bound: {self.poincare.status} "
                f"({self.poincare.deg_D} <= {self.poincare.deg_F} + {self.poincare.n})"
            )
        lines += [f"- warning: {w}" for w in self.warnings]
        lines.append(f"- status: **{self.status}**")
        return "\n".join(lines) + "\n"


class ChernReport(BaseModel):
    scene: str
    ring: str
    log_tangent: list[str]
    foliation_tangent: list[str]
    virtual: list[str]
    phi: str
    chern_side: str
    expected_singularities: int | None = None
    log_type: Literal["chern_report"] = "chern_report"

    def to_markdown(self) -> str:
        return "\n".join(
            [
                f"# {self.scene}: characteristic classes in {self.ring}",
                "",
                f"- c(T(-log D)) = {' + '.join(self.log_tangent)}",
                f"- c(T_F) = {' + '.join(self.foliation_tangent)}",
                f"- c(T(-log D) - T_F) = {' + '.join(self.virtual)}",
                f"- integral of {self.phi}: {self.chern_side}",
                f"- expected singularities: {self.expected_singularities}",
            ]
        ) + "\n"


class LedgerPointRecord(BaseModel):
    chart: int
    point: list[str]
    on_divisor: bool
    milnor: int
    bb: str
    res_log: str | None = None
    res_log_c2: str | None = None
    gsv: int | None = None
    cs: str | None = None


class LedgerReport(BaseModel):
    """Surface ledgers: GSV, Camacho-Sad and the BB - Res^log identity."""

    scene: str
    points: list[LedgerPointRecord]
    bb: str
    res_log: str
    gsv: int
    cs: str
    divisor_square: str | None = None
    normal_dot_divisor: str | None = None
    camacho_sad_holds: bool | None = None
    brunella_holds: bool | None = None
    ledger_lhs: str
    ledger_rhs: str
    ledger_holds: bool
    gsv_nonnegative: bool
    milnor_off_divisor: int
    res_log_c2: str
    c2_chern_side: str | None = None
    milnor_ledger_holds: bool | None = None
    log_type: Literal["ledger_report"] = "ledger_report"

    @property
    def ok(self) -> bool:
        checks = [
            self.ledger_holds,
            self.gsv_nonnegative,
            self.camacho_sad_holds,
            self.brunella_holds,
            self.milnor_ledger_holds,
        ]
        return all(c for c in checks if c is not None)

    def to_markdown(self) -> str:
        def mark(flag: bool | None) -> str:
            return "n/a" if flag is None else ("holds" if flag else "FAILS")

        lines = [
            f"# {self.scene}: surface ledger",
            "",
            "| chart | point | on D | BB | Res^log | GSV | CS |",
            "|---|---|---|---|---|---|---|",
        ]
        for p in self.points:
            lines.append(
                f"| {p.chart} | ({', '.join(p.point)}) | {'yes' if p.on_divisor else 'no'} "
                f"| {p.bb} | {p.res_log or ''} | {'' if p.gsv is None else p.gsv} "
                f"| {p.cs or ''} |"
            )
        lines += [
            "",
            f"- sum CS = {self.cs}, D^2 = {self.divisor_square}: {mark(self.camacho_sad_holds)}",
            f"- sum GSV = {self.gsv}, (N_F - D).D = {self.normal_dot_divisor}: "
            f"{mark(self.brunella_holds)}",
            f"- BB - Res^log = {self.ledger_lhs}, 2 GSV + CS = {self.ledger_rhs}: "
            f"{mark(self.ledger_holds)}",
            f"- 2 GSV = BB - Res^log - CS >= 0: {mark(self.gsv_nonnegative)}",
            f"- mu off D + Res^log_c2 = {self.milnor_off_divisor} + {self.res_log_c2}, "
            f"c2 side = {self.c2_chern_side}: {mark(self.milnor_ledger_holds)}",
        ]
        return "\n".join(lines) + "\n"

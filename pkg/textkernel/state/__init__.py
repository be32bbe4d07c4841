from textkernel.state.timings import STANDARD_STAGES, StageRecord, TimingLedger

__all__ = ["STANDARD_STAGES", "StageRecord", "TimingLedger"]

"""Update/relaxation experiment on the memory X

Each step i records the correlations of rho_SX(t_i), applies the damping
update to X instantaneously, records the post-update correlations and the
work ledger of the update, then relaxes the joint state under the cascaded
master equation for one step duration.
"""
import logging
from typing import Iterator, List, Optional, Tuple

import numpy as np

from domain.channels import apply, lift_local, update_channel
from domain.discord import discord
from domain.dynamics import build_liouvillian, evolve, fixed_point, propagator
from domain.entities import ProtocolConfig, ProtocolRecord, ProtocolRun
from domain.enums import Subsystem
from domain.errors import ConsistencyError, ProtocolStepError, QuantumPredictionError
from domain.states import canonical, initial_state, marginal, reorder
from domain.thermo import lost_work_decomposition
from domain.value_objects import DensityMatrix, KrausChannel

logger = logging.getLogger(__name__)


def _update_superoperator(channel: KrausChannel) -> np.ndarray:
    return sum(np.kron(k.conj(), k) for k in channel.operators)


def _update_step(cfg: ProtocolConfig, step: int, rho: DensityMatrix) -> DensityMatrix:
    channel = lift_local(update_channel(cfg.probability_at(step)), rho.dims, Subsystem.X)
    updated = apply(channel, rho, cfg.tolerances)
    drift = float(np.max(np.abs(marginal(updated, Subsystem.S).mat - marginal(rho, Subsystem.S).mat)))
    if drift > cfg.tolerances.marginal_invariance:
        raise ConsistencyError("update on X changed the state of S", drift)
    return updated


def build_record(cfg: ProtocolConfig, step: int, before: DensityMatrix, after: DensityMatrix) -> ProtocolRecord:
    """All tabulated quantities for one update; work columns in units of ln 2 / beta"""
    ledger = lost_work_decomposition(
        before, after, cfg.beta, Subsystem.X, cfg.optimizer, cfg.n_qubits, cfg.tolerances
    )
    pre, post = ledger.discord_before, ledger.discord_after
    reverse_pre = discord(before, Subsystem.S, cfg.optimizer, cfg.tolerances)
    reverse_post = discord(after, Subsystem.S, cfg.optimizer, cfg.tolerances)
    record = ProtocolRecord(
        step=step,
        kt=step * cfg.kdt,
        I_SX=pre.mutual_information,
        I_SXp=post.mutual_information,
        IC_SX=pre.classical_correlations,
        IC_SXp=post.classical_correlations,
        delta_SX=pre.discord,
        delta_SXp=post.discord,
        delta_XS=reverse_pre.discord,
        delta_XSp=reverse_post.discord,
        W_lost=ledger.w_lost_bits,
        W_C=ledger.w_lost_classical_bits,
        W_Q=ledger.w_lost_quantum_bits,
        theta_min_pre=pre.argmin_basis.theta,
        phi_min_pre=pre.argmin_basis.phi,
        theta_min_post=post.argmin_basis.theta,
        phi_min_post=post.argmin_basis.phi,
    )
    record.check_closure(cfg.tolerances.cross_check)
    return record


def iterate_protocol(
    cfg: ProtocolConfig, start: Optional[DensityMatrix] = None
) -> Iterator[Tuple[ProtocolRecord, DensityMatrix]]:
    """Yields each step's record with the relaxed state that follows it"""
    relaxation = propagator(build_liouvillian(cfg.kappa, cfg.tolerances), cfg.step_duration)
    rho = canonical(start if start is not None else initial_state())
    for step in range(cfg.n_steps):
        try:
            updated = _update_step(cfg, step, rho)
            record = build_record(cfg, step, rho, updated)
            rho = evolve(updated, relaxation, cfg.tolerances)
        except ProtocolStepError:
            raise
        except QuantumPredictionError as exc:
            raise ProtocolStepError(step, exc) from exc
        logger.debug(
            "step %d: I=%.6f I'=%.6f W_lost=%.6f W_C=%.6f W_Q=%.6f",
            step, record.I_SX, record.I_SXp, record.W_lost, record.W_C, record.W_Q,
        )
        yield record, rho


def run_protocol(cfg: ProtocolConfig) -> List[ProtocolRecord]:
    return [record for record, _ in iterate_protocol(cfg)]


def execute(run: ProtocolRun) -> ProtocolRun:
    """Drive a pending run to COMPLETED, or to FAILED with the failing step"""
    run.start()
    rho = None
    try:
        for record, rho in iterate_protocol(run.config):
            run.append_record(record)
    except ProtocolStepError as exc:
        logger.warning("run %s failed: %s", run.run_id, exc)
        run.fail(exc.step, str(exc.cause))
        return run
    except Exception as exc:
        step = len(run.records)
        logger.exception("run %s failed at step %d", run.run_id, step)
        run.fail(step, f"{type(exc).__name__}: {exc}")
        return run
    run.complete(reorder(rho, run.config.ordering))
    return run


def periodic_steady_state(cfg: ProtocolConfig, reference: Optional[DensityMatrix] = None) -> DensityMatrix:
    """Pre-update state that one update-plus-relaxation cycle maps to itself

    The pre-update states of a long run converge here (for a constant update
    probability ``cfg.p``). ``reference`` selects the limit when the cycle
    has several fixed points; it defaults to the initial state.
    """
    relaxation = propagator(build_liouvillian(cfg.kappa, cfg.tolerances), cfg.step_duration)
    channel = lift_local(update_channel(cfg.p), (2, 2), Subsystem.X)
    cycle = relaxation @ _update_superoperator(channel)
    reference = reference if reference is not None else initial_state()
    return fixed_point(cycle - np.eye(cycle.shape[0]), reference, cfg.tolerances, label="periodic steady state")

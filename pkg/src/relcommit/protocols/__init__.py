from relcommit.protocols.audits import (
    BindingAudit,
    HidingAudit,
    TableScript,
    all_bob_scripts,
    binding_audit_multiround,
    count_bob_scripts,
    hiding_audit_all_scripts,
    hiding_audit_multiround,
    honest_p0_plus_p1,
    multiround_binding_game,
)
from relcommit.protocols.common import Adversary, CommitmentOutcome
from relcommit.protocols.local_command import local_command_bc_run, local_command_binding_audit
from relcommit.protocols.multiround import (
    MultiroundState,
    multiround_honest_response,
    multiround_run,
    multiround_verify,
)
from relcommit.protocols.oblivious_transfer import distributed_ot_run, dot_retrieve
from relcommit.protocols.sbgkw import SbgkwState, expiry_adversary, sbgkw_run
from relcommit.protocols.secret_sharing import secret_sharing_bc_run

__all__ = [
    "Adversary", "BindingAudit", "CommitmentOutcome", "HidingAudit", "MultiroundState", "SbgkwState",
    "TableScript", "all_bob_scripts", "binding_audit_multiround", "count_bob_scripts", "distributed_ot_run",
    "dot_retrieve", "expiry_adversary", "hiding_audit_all_scripts", "hiding_audit_multiround",
    "honest_p0_plus_p1", "local_command_bc_run", "local_command_binding_audit", "multiround_binding_game",
    "multiround_honest_response", "multiround_run", "multiround_verify", "sbgkw_run",
    "secret_sharing_bc_run",
]

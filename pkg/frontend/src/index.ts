export { ActionSpace, displacement, moveTable, type Move } from "./actions.js";
export {
  OracleReplayAgent,
  RandomAgent,
  loadReplayLogs,
  type Agent,
} from "./agents.js";
export { runBaseline, type BaselineOptions } from "./baseline.js";
export {
  ProtocolClient,
  ProtocolError,
  decodeVisual,
  serveArgs,
  type ServerOptions,
  type StepReply,
  type WireObservation,
} from "./client.js";
export { RemoteEnv, type Observation, type ObservationSpec, type StepResult } from "./env.js";
export {
  loadLog,
  logToLines,
  parseLog,
  saveLog,
  type EpisodeLog,
  type StepRecord,
  type TrialSummary,
} from "./logs.js";
export {
  episodeMetrics,
  evaluationReport,
  rhoActions,
  rhoGoals,
  rhoPlan,
  type EpisodeMetrics,
  type Report,
} from "./metrics.js";
export {
  DIRECTIONS,
  HINTS,
  SYMBOLIC_CATEGORIES,
  SYMBOLIC_SLOTS,
  decodePanel,
  symbolicRows,
  type DirectionName,
  type HintName,
  type PanelDict,
} from "./panel.js";
export {
  DEFAULT_PARAMS,
  paramsFromHeader,
  paramsToHeader,
  resolveParams,
  type TaskParams,
} from "./params.js";
export { loadProblemSet, optimalPlanLength, type Cell, type ProblemRecord } from "./problems.js";
export { mulberry32, randomIndex, type Rng } from "./rng.js";

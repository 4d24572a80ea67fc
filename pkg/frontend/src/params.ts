/** Episode-level task parameters, mirroring the server's defaults. */
export interface TaskParams {
  maxOptLen: number;
  trialsPerEpisode: number;
  maxTrialSteps: number;
  maxEpisodeSteps: number;
  gamma: number;
  goalReward: number;
  invalidPenalty: number;
  shapingCoeff: number;
}

export const DEFAULT_PARAMS: TaskParams = {
  maxOptLen: 5,
  trialsPerEpisode: 10,
  maxTrialSteps: 200,
  maxEpisodeSteps: 500,
  gamma: 0.95,
  goalReward: 100.0,
  invalidPenalty: -5.0,
  shapingCoeff: 1.0,
};

export function resolveParams(partial: Partial<TaskParams> = {}): TaskParams {
  const params = { ...DEFAULT_PARAMS, ...partial };
  if (![1, 3, 5].includes(params.maxOptLen)) {
    throw new Error(`maxOptLen must be one of 1, 3, 5; got ${params.maxOptLen}`);
  }
  if (params.trialsPerEpisode < 1 || params.maxTrialSteps < 1 || params.maxEpisodeSteps < 1) {
    throw new Error("trial and step limits must be positive");
  }
  return params;
}

/** Snake-case record in the field order episode-log headers use. */
export function paramsToHeader(params: TaskParams): Record<string, number> {
  return {
    max_opt_len: params.maxOptLen,
    trials_per_episode: params.trialsPerEpisode,
    max_trial_steps: params.maxTrialSteps,
    max_episode_steps: params.maxEpisodeSteps,
    gamma: params.gamma,
    goal_reward: params.goalReward,
    invalid_penalty: params.invalidPenalty,
    shaping_coeff: params.shapingCoeff,
  };
}

export function paramsFromHeader(header: Record<string, number>): TaskParams {
  return {
    maxOptLen: header.max_opt_len,
    trialsPerEpisode: header.trials_per_episode,
    maxTrialSteps: header.max_trial_steps,
    maxEpisodeSteps: header.max_episode_steps,
    gamma: header.gamma,
    goalReward: header.goal_reward,
    invalidPenalty: header.invalid_penalty,
    shapingCoeff: header.shaping_coeff,
  };
}

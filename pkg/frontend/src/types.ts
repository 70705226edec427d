// Wire-format types shared with the HTTP service. Field names and
// optionality match the JSON the service reads and writes; anything the
// editor keeps for itself lives next to the code that owns it.

export type QubitSpecDoc = {
  name?: string;
  value?: number;
  editable?: boolean;
  notation?: "bit" | "braket";
};

export type PlacementDoc = {
  name: string;
  target: number;
  time: number;
  controls?: number[];
  antiControls?: number[];
  swapPartner?: number;
  editable?: boolean;
};

export type CustomGateDoc = {
  name: string;
  matrix: [number, number][][]; // rows of [re, im] pairs
};

export type CircuitDoc = {
  nQubits: number;
  nMoments: number;
  qubits?: QubitSpecDoc[];
  placements?: PlacementDoc[];
  customGates?: CustomGateDoc[];
};

export type ExerciseDoc = {
  nQubits: number;
  nMoments: number;
  header?: string;
  stem?: string;
  qubitNotation?: "bit" | "braket";
  showChart?: boolean;
  showOutputBits?: boolean;
  showShotTable?: boolean;
  hideZeroRows?: boolean;
  leftAxisLabel?: string;
  middleAxisLabel?: string;
  rightAxisLabel?: string;
  gates?: string[];
  samplingMode?: "matrix" | "sample" | "manual";
  sampleSize?: number;
  qubits?: QubitSpecDoc[];
  initialCircuit?: PlacementDoc[];
  inputFilters?: string[];
  pointsRule?: { multiplier?: number };
  feedbackText?: { correct?: string; conditionWrong?: string; wrong?: string };
  customGates?: CustomGateDoc[];
};

export type TaskSummary = { taskId: string; header: string };

export type GradeResultDoc = {
  correct: boolean;
  points: number;
  feedback: string;
  failedStage?: string;
  failedCondition?: string;
};

export type AttemptResponse = {
  id: number;
  taskId: string;
  userId: string;
  submittedAt: string;
  result: GradeResultDoc;
};

export type SimResponse = {
  nQubits: number;
  input: string;
  distribution?: Record<string, number>;
  state?: [number, number][];
  counts?: Record<string, number>;
};

export type TaskStatsResponse = {
  taskId: string;
  attemptCount: number;
  averageAttemptsToCorrect: number | null;
};

export type ShotRecord = { index: number; input: string; output: string };

/**
 * Latest-wins request gate: each view keeps at most one search in
 * flight. Starting a new request aborts the previous one, and a stale
 * response that loses the race resolves to null instead of data.
 */

export interface LatestGate {
  run<T>(work: (signal: AbortSignal) => Promise<T>): Promise<T | null>;
}

export function latestGate(): LatestGate {
  let controller: AbortController | null = null;
  let generation = 0;
  return {
    async run<T>(work: (signal: AbortSignal) => Promise<T>): Promise<T | null> {
      controller?.abort();
      controller = new AbortController();
      const mine = ++generation;
      const signal = controller.signal;
      try {
        const result = await work(signal);
        return mine === generation ? result : null;
      } catch (error) {
        if (mine !== generation || signal.aborted) return null;
        throw error;
      }
    },
  };
}

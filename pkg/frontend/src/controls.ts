/**
 * Enablement rules for the interactive query panel's controls.
 *
 * Pure function of session status, current selection and whether a request
 * is already in flight (at most one session-mutating request at a time,
 * mirroring the server's busy rule).
 */

export type Status = 'none' | 'created' | 'paused' | 'running' | 'done' | 'stopped';

export interface Selection {
  kind: 'vertex' | 'edge';
  id: number;
}

export interface ControlState {
  continueEnabled: boolean;
  stopEnabled: boolean;
  newSessionEnabled: boolean;
  expandEnabled: boolean;
  endpointsEnabled: boolean;
  fetchEnabled: boolean;
  bookmarkEnabled: boolean;
  restoreEnabled: boolean;
}

export function controlState(status: Status, selection: Selection | null, pending = false): ControlState {
  const disabled: ControlState = {
    continueEnabled: false,
    stopEnabled: false,
    newSessionEnabled: false,
    expandEnabled: false,
    endpointsEnabled: false,
    fetchEnabled: false,
    bookmarkEnabled: false,
    restoreEnabled: false,
  };
  if (pending) {
    return disabled;
  }
  if (status === 'none') {
    return { ...disabled, newSessionEnabled: true };
  }
  if (status === 'stopped') {
    // a stopped driver query ends the session; only starting over makes sense
    return { ...disabled, newSessionEnabled: true };
  }
  const running = status === 'running';
  const exploring = !running; // created, paused and done all allow exploration
  return {
    continueEnabled: status === 'created' || status === 'paused',
    stopEnabled: status === 'created' || status === 'paused',
    newSessionEnabled: true,
    expandEnabled: exploring && selection?.kind === 'vertex',
    endpointsEnabled: exploring && selection?.kind === 'edge',
    fetchEnabled: exploring && selection !== null,
    bookmarkEnabled: exploring,
    restoreEnabled: exploring,
  };
}

import { DriverFormState } from '../src/form';

/** The walkthrough form: US women older than 21 who joined after 2009. */
export function demoForm(): DriverFormState {
  return {
    dataset: 'social',
    kind: 'vertex-scan',
    elementType: 'person',
    conditions: [
      { attr: 'gender', op: 'eq', tag: 'str', value: 'female' },
      { attr: 'location', op: 'eq', tag: 'str', value: 'United States' },
      { attr: 'age', op: 'gt', tag: 'int', value: '21' },
      { attr: 'joinDate', op: 'ge', tag: 'ts', value: '1262304000' },
    ],
    breakpoints: [],
    start: '',
    direction: 'out',
    maxDepth: '',
  };
}
